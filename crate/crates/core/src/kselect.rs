//! Choosing the number of supernodes: Greedy+ suggestion plus a
//! relative-size sweep whose argmin ("valley bottom") picks k.

use rayon::prelude::*;

use crate::error::SummaryError;
use crate::graph::MultiRelationGraph;
use crate::holistic::{greedy_plus_partition, kmedian_plus};

/// Supernode count of the Greedy+ summary.
pub fn suggest_k(g: &MultiRelationGraph) -> usize {
    greedy_plus_partition(g, None).k()
}

/// Default sweep window around k': radius max(5, n/10), clamped to [1, n].
pub fn default_sweep_range(g: &MultiRelationGraph, k_prime: usize) -> (usize, usize) {
    let radius = 5.max(g.n() / 10);
    (1.max(k_prime.saturating_sub(radius)), g.n().min(k_prime + radius))
}

/// Relative size of the k-Median+ summary for each k in the range.
/// Sweep points run on parallel workers; the curve is assembled in k order.
pub fn sweep_k(
    g: &MultiRelationGraph,
    k_min: usize,
    k_max: usize,
    step: usize,
    seed: u64,
) -> Result<Vec<(usize, f64)>, SummaryError> {
    if k_min < 1 || k_min > k_max || k_max > g.n() || step == 0 {
        return Err(SummaryError::KOutOfRange(k_min, g.n()));
    }
    let ks: Vec<usize> = (k_min..=k_max).step_by(step).collect();
    ks.into_par_iter()
        .map(|k| Ok((k, kmedian_plus(g, k, seed)?.cost().relative_size())))
        .collect()
}

/// Valley minimum: the k with the smallest relative size, ties to the
/// smallest k.
pub fn select_k(curve: &[(usize, f64)]) -> Result<usize, SummaryError> {
    if curve.is_empty() {
        return Err(SummaryError::KOutOfRange(0, 0));
    }
    let mut best = curve[0];
    for &(k, rs) in &curve[1..] {
        if rs < best.1 || (rs == best.1 && k < best.0) {
            best = (k, rs);
        }
    }
    Ok(best.0)
}
