//! Holistic multi-relation summarizers (Greedy+, Randomized+, k-Median+),
//! the two-step pipeline driver, and the Hybrid combination.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aggregate::Aggregator;
use crate::engine::{MergeEngine, MergeRecord};
use crate::error::SummaryError;
use crate::graph::MultiRelationGraph;
use crate::kmedian::{kmedian_cluster, SparseRow};
use crate::partition::Partition;
use crate::single;
use crate::summary::{build_summary, Summary};

/// Greedy over multi-relation costs; the q = 1 case coincides with the
/// single-relation Greedy.
pub fn greedy_plus(
    g: &MultiRelationGraph,
    k_target: Option<usize>,
) -> Result<Summary, SummaryError> {
    Ok(greedy_plus_traced(g, k_target)?.0)
}

/// Greedy+ along with its merge trace (pair representatives and fractional
/// reductions, in merge order).
pub fn greedy_plus_traced(
    g: &MultiRelationGraph,
    k_target: Option<usize>,
) -> Result<(Summary, Vec<MergeRecord>), SummaryError> {
    if let Some(k) = k_target {
        if k < 1 || k > g.n() {
            return Err(SummaryError::KOutOfRange(k, g.n()));
        }
    }
    let mut engine = MergeEngine::new(g);
    let trace = engine.run_greedy(k_target);
    let summary = build_summary(g, &engine.current_partition())?;
    Ok((summary, trace))
}

pub fn greedy_plus_partition(g: &MultiRelationGraph, k_target: Option<usize>) -> Partition {
    let mut engine = MergeEngine::new(g);
    engine.run_greedy(k_target);
    engine.current_partition()
}

/// Randomized exploration with multi-relation costs.
pub fn randomized_plus(g: &MultiRelationGraph, seed: u64) -> Result<Summary, SummaryError> {
    let mut engine = MergeEngine::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    engine.run_randomized(&mut rng);
    build_summary(g, &engine.current_partition())
}

/// Rows of the concatenated adjacency matrix (A_1 | ... | A_q).
pub fn concatenated_rows(g: &MultiRelationGraph) -> Vec<SparseRow> {
    (0..g.n()).map(|u| g.concatenated_row(u).expect("in range").columns).collect()
}

/// k-median over concatenated rows: one uniform partition across relations.
pub fn kmedian_plus(g: &MultiRelationGraph, k: usize, seed: u64) -> Result<Summary, SummaryError> {
    let p = kmedian_cluster(&concatenated_rows(g), k, seed)?;
    build_summary(g, &p)
}

pub fn kmedian_plus_partition(
    g: &MultiRelationGraph,
    k: usize,
    seed: u64,
) -> Result<Partition, SummaryError> {
    kmedian_cluster(&concatenated_rows(g), k, seed)
}

/// Step-one algorithm of the two-step pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleAlgorithm {
    Greedy,
    Randomized,
    Sweg { iterations: usize },
    /// `k: None` lets Greedy suggest a per-relation k.
    KMedian { k: Option<usize> },
}

/// Two-step pipeline: summarize every relation in isolation, aggregate the
/// q partitions, then build the summary for the aggregated partition.
pub fn two_step(
    g: &MultiRelationGraph,
    algo: SingleAlgorithm,
    agg: Aggregator,
    seed: u64,
) -> Result<Summary, SummaryError> {
    let partitions = per_relation_partitions(g, algo, seed)?;
    let merged = agg.run(&partitions)?;
    build_summary(g, &merged)
}

/// The q per-relation partitions of the two-step pipeline's first step.
/// Relations are processed on parallel workers; per-relation seeds are
/// derived as seed + r so results do not depend on worker count.
pub fn per_relation_partitions(
    g: &MultiRelationGraph,
    algo: SingleAlgorithm,
    seed: u64,
) -> Result<Vec<Partition>, SummaryError> {
    (0..g.q())
        .into_par_iter()
        .map(|r| {
            let view = g.relation_view(r)?;
            let rel_seed = seed.wrapping_add(r as u64);
            match algo {
                SingleAlgorithm::Greedy => single::greedy_partition(&view, None),
                SingleAlgorithm::Randomized => Ok(single::randomized_partition(&view, rel_seed)),
                SingleAlgorithm::Sweg { iterations } => {
                    single::sweg_partition(&view, iterations, rel_seed)
                }
                SingleAlgorithm::KMedian { k } => {
                    let k = match k {
                        Some(k) => k,
                        None => single::greedy_partition(&view, None)?.k(),
                    };
                    single::kmedian_view_partition(&view, k, rel_seed)
                }
            }
        })
        .collect()
}

/// Hybrid: (1) let Greedy+ suggest k' unless overridden, (2) k-Median+ with
/// that k, (3) positive-phase Greedy+ refinement from the k-Median+
/// partition; returns the better of the two summaries.
pub fn hybrid(
    g: &MultiRelationGraph,
    k_override: Option<usize>,
    seed: u64,
) -> Result<Summary, SummaryError> {
    let k = match k_override {
        Some(k) => {
            if k < 1 || k > g.n() {
                return Err(SummaryError::KOutOfRange(k, g.n()));
            }
            k
        }
        None => greedy_plus_partition(g, None).k().max(1),
    };
    let base = kmedian_plus(g, k, seed)?;
    let mut engine = MergeEngine::with_partition(g, &base.partition);
    engine.run_greedy(None);
    let refined = build_summary(g, &engine.current_partition())?;
    if refined.cost().total() <= base.cost().total() {
        Ok(refined)
    } else {
        Ok(base)
    }
}
