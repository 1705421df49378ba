//! k-median clustering of sparse 0/1 rows under L1 distance.
//!
//! Seeding is k-median++ (first center uniform, later centers sampled
//! proportionally to the L1 distance to the nearest chosen center); the
//! alternation assigns rows to the nearest center (ties to the lowest
//! center index) and replaces each center by the coordinate-wise median of
//! its members (ties to 0). Empty clusters are reseeded to the row farthest
//! from its center. Several restarts are drawn from the one seeded stream
//! and the lowest-cost run wins, so results are deterministic per seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SummaryError;
use crate::partition::Partition;

/// A sparse 0/1 row: strictly increasing column indices.
pub type SparseRow = Vec<u32>;

/// L1 distance between two sorted sparse rows = |symmetric difference|.
pub fn l1_distance(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j) = (0, 0);
    let mut d = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                d += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                d += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    d + (a.len() - i) as u64 + (b.len() - j) as u64
}

/// Coordinate-wise median of rows (strict majority sets a column; ties → 0).
fn median_row(rows: &[&SparseRow]) -> SparseRow {
    let mut counts: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for row in rows {
        for &c in row.iter() {
            *counts.entry(c).or_insert(0) += 1;
        }
    }
    let half = rows.len();
    let mut out: SparseRow =
        counts.into_iter().filter(|&(_, cnt)| 2 * cnt > half).map(|(c, _)| c).collect();
    out.sort_unstable();
    out
}

const MAX_ROUNDS: usize = 50;

struct Run {
    assignment: Vec<u32>,
    cost: u64,
}

fn kmedianpp_seed<R: Rng>(rows: &[SparseRow], k: usize, rng: &mut R) -> Vec<SparseRow> {
    let n = rows.len();
    let mut centers: Vec<SparseRow> = Vec::with_capacity(k);
    let mut nearest: Vec<u64> = vec![u64::MAX; n];
    let first = rng.gen_range(0..n);
    centers.push(rows[first].clone());
    for (i, row) in rows.iter().enumerate() {
        nearest[i] = l1_distance(row, &centers[0]);
    }
    while centers.len() < k {
        let total: u64 = nearest.iter().sum();
        let pick = if total == 0 {
            // all rows coincide with some center; take the lowest-index row
            // not yet a center
            (0..n)
                .find(|&i| !centers.iter().any(|c| c == &rows[i]))
                .unwrap_or(0)
        } else {
            let mut t = rng.gen_range(0..total);
            let mut chosen = n - 1;
            for (i, &w) in nearest.iter().enumerate() {
                if t < w {
                    chosen = i;
                    break;
                }
                t -= w;
            }
            chosen
        };
        centers.push(rows[pick].clone());
        for (i, row) in rows.iter().enumerate() {
            let d = l1_distance(row, centers.last().unwrap());
            if d < nearest[i] {
                nearest[i] = d;
            }
        }
    }
    centers
}

fn lloyd(rows: &[SparseRow], k: usize, mut centers: Vec<SparseRow>) -> Run {
    let n = rows.len();
    let mut assignment: Vec<u32> = vec![0; n];
    let mut prev: Option<Vec<u32>> = None;
    for _ in 0..MAX_ROUNDS {
        // assignment step: nearest center, ties to the lowest index
        for (i, row) in rows.iter().enumerate() {
            let mut best = 0u32;
            let mut best_d = u64::MAX;
            for (c, center) in centers.iter().enumerate() {
                let d = l1_distance(row, center);
                if d < best_d {
                    best_d = d;
                    best = c as u32;
                }
            }
            assignment[i] = best;
        }
        // reseed empty clusters with the row farthest from its center
        loop {
            let mut sizes = vec![0usize; k];
            for &a in &assignment {
                sizes[a as usize] += 1;
            }
            let empty = match sizes.iter().position(|&s| s == 0) {
                Some(e) => e,
                None => break,
            };
            let mut far_row = None;
            let mut far_d = 0u64;
            for (i, row) in rows.iter().enumerate() {
                if sizes[assignment[i] as usize] < 2 {
                    continue;
                }
                let d = l1_distance(row, &centers[assignment[i] as usize]);
                if far_row.is_none() || d > far_d {
                    far_row = Some(i);
                    far_d = d;
                }
            }
            let moved = far_row.expect("k <= n guarantees a donor cluster");
            assignment[moved] = empty as u32;
            centers[empty] = rows[moved].clone();
        }
        if prev.as_ref() == Some(&assignment) {
            break;
        }
        prev = Some(assignment.clone());
        // update step
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<&SparseRow> = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| assignment[*i] == c as u32)
                .map(|(_, r)| r)
                .collect();
            if !members.is_empty() {
                *center = median_row(&members);
            }
        }
    }
    let cost = rows
        .iter()
        .enumerate()
        .map(|(i, row)| l1_distance(row, &centers[assignment[i] as usize]))
        .sum();
    Run { assignment, cost }
}

fn restarts_for(n: usize) -> usize {
    if n <= 16 {
        n.max(1)
    } else if n <= 64 {
        8
    } else {
        3
    }
}

/// k-median clustering of `rows`; returns a partition with exactly k
/// non-empty clusters. Deterministic given `seed`.
pub fn kmedian_cluster(rows: &[SparseRow], k: usize, seed: u64) -> Result<Partition, SummaryError> {
    let n = rows.len();
    if k == 0 || k > n {
        return Err(SummaryError::KOutOfRange(k, n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Run> = None;
    for _ in 0..restarts_for(n) {
        let centers = kmedianpp_seed(rows, k, &mut rng);
        let run = lloyd(rows, k, centers);
        if best.as_ref().is_none_or(|b| run.cost < b.cost) {
            best = Some(run);
        }
    }
    Ok(Partition::from_assignment(&best.unwrap().assignment))
}
