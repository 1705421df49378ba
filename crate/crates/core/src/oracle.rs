//! Brute-force partition enumeration via restricted growth strings;
//! the test oracle behind the approximation-bound checks.

use crate::error::SummaryError;
use crate::graph::MultiRelationGraph;
use crate::partition::Partition;
use crate::summary::{build_summary, CostBreakdown};

const MAX_ORACLE_NODES: usize = 10;

/// Iterator over all restricted growth strings of length n, i.e. all set
/// partitions in canonical numbering.
pub struct PartitionIter {
    n: usize,
    a: Vec<u32>,
    b: Vec<u32>,
    done: bool,
    first: bool,
}

impl PartitionIter {
    pub fn new(n: usize) -> Self {
        PartitionIter { n, a: vec![0; n.max(1)], b: vec![1; n.max(1)], done: n == 0, first: true }
    }
}

impl Iterator for PartitionIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.a.clone());
        }
        // advance to the next restricted growth string
        let n = self.n;
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.a[i] < self.b[i] {
                break;
            }
        }
        self.a[i] += 1;
        for j in (i + 1)..n {
            self.a[j] = 0;
            self.b[j] = self.b[i].max(self.a[i] + 1);
        }
        Some(self.a.clone())
    }
}

/// Minimum total-cost summary over all partitions (or all k-block
/// partitions when k is given). Guarded to n ≤ 10.
pub fn brute_force_optimal(
    g: &MultiRelationGraph,
    k: Option<usize>,
) -> Result<(Partition, CostBreakdown), SummaryError> {
    if g.n() > MAX_ORACLE_NODES {
        return Err(SummaryError::KOutOfRange(g.n(), MAX_ORACLE_NODES));
    }
    if let Some(k) = k {
        if k < 1 || k > g.n() {
            return Err(SummaryError::KOutOfRange(k, g.n()));
        }
    }
    let mut best: Option<(Partition, CostBreakdown)> = None;
    for rgs in PartitionIter::new(g.n()) {
        let blocks = rgs.iter().max().map_or(0, |&m| m as usize + 1);
        if let Some(k) = k {
            if blocks != k {
                continue;
            }
        }
        let p = Partition::from_assignment(&rgs);
        let c = build_summary(g, &p)?.cost();
        if best.as_ref().is_none_or(|(_, b)| c.total() < b.total()) {
            best = Some((p, c));
        }
    }
    best.ok_or(SummaryError::KOutOfRange(k.unwrap_or(0), g.n()))
}

/// Minimum correction count over all k-block partitions; the oracle for
/// the 16-approximation checks.
pub fn min_corrections_for_k(g: &MultiRelationGraph, k: usize) -> Result<u64, SummaryError> {
    if g.n() > MAX_ORACLE_NODES {
        return Err(SummaryError::KOutOfRange(g.n(), MAX_ORACLE_NODES));
    }
    if k < 1 || k > g.n() {
        return Err(SummaryError::KOutOfRange(k, g.n()));
    }
    let mut best: Option<u64> = None;
    for rgs in PartitionIter::new(g.n()) {
        let blocks = rgs.iter().max().map_or(0, |&m| m as usize + 1);
        if blocks != k {
            continue;
        }
        let p = Partition::from_assignment(&rgs);
        let c = build_summary(g, &p)?.cost().corrections();
        if best.is_none_or(|b| c < b) {
            best = Some(c);
        }
    }
    best.ok_or(SummaryError::KOutOfRange(k, g.n()))
}
