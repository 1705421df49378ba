//! Single-relation summarizers: Greedy, Randomized, SWeG, and the
//! k-median route. All of them produce a partition and hand it to
//! `build_summary`; the merge-based ones share `MergeEngine` with their
//! holistic counterparts (a view is just a one-relation relation set).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::MergeEngine;
use crate::error::SummaryError;
use crate::graph::{RelationSet, SingleRelationView};
use crate::kmedian::{kmedian_cluster, SparseRow};
use crate::partition::Partition;
use crate::summary::{build_summary, Summary};

fn check_k_target(k: Option<usize>, n: usize) -> Result<(), SummaryError> {
    if let Some(k) = k {
        if k < 1 || k > n {
            return Err(SummaryError::KOutOfRange(k, n));
        }
    }
    Ok(())
}

/// Hill-climbing merge of the best 2-hop pair until no positive fractional
/// reduction remains; with `k_target`, stops at k supernodes or keeps
/// merging the least-sacrifice pairs until k is reached.
pub fn greedy_summarize(
    view: &SingleRelationView<'_>,
    k_target: Option<usize>,
) -> Result<Summary, SummaryError> {
    check_k_target(k_target, view.n())?;
    let mut engine = MergeEngine::new(view);
    engine.run_greedy(k_target);
    build_summary(&view.to_graph(), &engine.current_partition())
}

pub fn greedy_partition(
    view: &SingleRelationView<'_>,
    k_target: Option<usize>,
) -> Result<Partition, SummaryError> {
    check_k_target(k_target, view.n())?;
    let mut engine = MergeEngine::new(view);
    engine.run_greedy(k_target);
    Ok(engine.current_partition())
}

/// Random exploration order, greedy choice of partner. Deterministic given
/// the seed.
pub fn randomized_summarize(
    view: &SingleRelationView<'_>,
    seed: u64,
) -> Result<Summary, SummaryError> {
    let mut engine = MergeEngine::new(view);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    engine.run_randomized(&mut rng);
    build_summary(&view.to_graph(), &engine.current_partition())
}

pub fn randomized_partition(view: &SingleRelationView<'_>, seed: u64) -> Partition {
    let mut engine = MergeEngine::new(view);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    engine.run_randomized(&mut rng);
    engine.current_partition()
}

/// T rounds of shingle grouping (fresh random permutation each round) with
/// the Randomized merge procedure inside each group.
pub fn sweg_summarize(
    view: &SingleRelationView<'_>,
    iterations: usize,
    seed: u64,
) -> Result<Summary, SummaryError> {
    let p = sweg_partition(view, iterations, seed)?;
    build_summary(&view.to_graph(), &p)
}

pub fn sweg_partition(
    view: &SingleRelationView<'_>,
    iterations: usize,
    seed: u64,
) -> Result<Partition, SummaryError> {
    if iterations == 0 {
        return Err(SummaryError::KOutOfRange(0, view.n()));
    }
    let n = view.n();
    let mut engine = MergeEngine::new(view);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..iterations {
        let mut perm: Vec<u32> = (1..=n as u32).collect();
        perm.shuffle(&mut rng);
        engine.run_sweg_round(&perm, &mut rng);
    }
    Ok(engine.current_partition())
}

/// Shingle of a node: minimum permutation rank over the closed
/// neighborhood N(u) ∪ {u}.
pub fn shingle<G: RelationSet>(g: &G, perm: &[u32], u: u32) -> u32 {
    let mut best = perm[u as usize];
    for r in 0..g.relation_count() {
        for &v in g.rel_neighbors(r, u) {
            best = best.min(perm[v as usize]);
        }
    }
    best
}

/// Adjacency rows of a single-relation view, for k-median.
pub fn view_rows(view: &SingleRelationView<'_>) -> Vec<SparseRow> {
    (0..view.n()).map(|u| view.neighbors(u as u32).to_vec()).collect()
}

/// k-median over the view's adjacency rows, then the optimal summary for
/// the resulting partition.
pub fn kmedian_summarize(
    view: &SingleRelationView<'_>,
    k: usize,
    seed: u64,
) -> Result<Summary, SummaryError> {
    let p = kmedian_cluster(&view_rows(view), k, seed)?;
    build_summary(&view.to_graph(), &p)
}

pub fn kmedian_view_partition(
    view: &SingleRelationView<'_>,
    k: usize,
    seed: u64,
) -> Result<Partition, SummaryError> {
    kmedian_cluster(&view_rows(view), k, seed)
}
