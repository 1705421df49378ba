//! Summary aggregation: combine q per-relation partitions into one
//! partition minimizing total disagreement, via the reduction to
//! correlation clustering. All distance arithmetic is exact: D(u,v) is kept
//! as an integer numerator over q.

use num_rational::Ratio;

use crate::error::SummaryError;
use crate::graph::NodeId;
use crate::partition::Partition;

/// Pairwise disagreement fractions over a set of input partitions.
/// `num(u,v)` counts the inputs that separate u and v, so
/// D(u,v) = num(u,v) / q.
pub struct DistanceOracle {
    n: usize,
    q: usize,
    num: Vec<u32>,
}

fn tri_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

impl DistanceOracle {
    pub fn new(partitions: &[Partition]) -> Result<Self, SummaryError> {
        let q = partitions.len();
        assert!(q > 0, "at least one input partition required");
        let n = partitions[0].n();
        for p in partitions {
            if p.n() != n {
                return Err(SummaryError::PartitionMismatch { partition: p.n(), graph: n });
            }
        }
        let mut num = vec![0u32; n * (n - 1) / 2];
        for p in partitions {
            for u in 0..n {
                for v in (u + 1)..n {
                    if !p.same_block(u as NodeId, v as NodeId) {
                        num[tri_index(n, u, v)] += 1;
                    }
                }
            }
        }
        Ok(DistanceOracle { n, q, num })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// q·D(u,v): integer in [0, q].
    pub fn numerator(&self, u: NodeId, v: NodeId) -> u32 {
        if u == v {
            return 0;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.num[tri_index(self.n, a as usize, b as usize)]
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Ratio<i64> {
        Ratio::new(self.numerator(u, v) as i64, self.q as i64)
    }

    /// Σ_v q·D(u,v): used for the Balls pivot order.
    fn total_numerator(&self, u: NodeId) -> u64 {
        (0..self.n as NodeId).filter(|&v| v != u).map(|v| self.numerator(u, v) as u64).sum()
    }
}

/// Number of unordered node pairs on which two partitions disagree.
pub fn disagreement(a: &Partition, b: &Partition) -> Result<u64, SummaryError> {
    if a.n() != b.n() {
        return Err(SummaryError::PartitionMismatch { partition: a.n(), graph: b.n() });
    }
    let mut count = 0;
    for u in 0..a.n() as NodeId {
        for v in (u + 1)..a.n() as NodeId {
            if a.same_block(u, v) != b.same_block(u, v) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Correlation-clustering objective of `p` against the inputs:
/// Σ_{same-block} D(u,v) + Σ_{cross-block} (1 − D(u,v)), exact rational.
pub fn correlation_cost(partitions: &[Partition], p: &Partition) -> Result<Ratio<i64>, SummaryError> {
    let oracle = DistanceOracle::new(partitions)?;
    Ok(correlation_cost_with(&oracle, p))
}

pub fn correlation_cost_with(oracle: &DistanceOracle, p: &Partition) -> Ratio<i64> {
    let q = oracle.q() as i64;
    let mut num = 0i64;
    let n = oracle.n() as NodeId;
    for u in 0..n {
        for v in (u + 1)..n {
            let d = oracle.numerator(u, v) as i64;
            num += if p.same_block(u, v) { d } else { q - d };
        }
    }
    Ratio::new(num, q)
}

/// BEST: return the input partition with the smallest total disagreement to
/// the others; ties to the lowest index.
pub fn aggregate_best(partitions: &[Partition]) -> Result<Partition, SummaryError> {
    if partitions.is_empty() {
        return Err(SummaryError::PartitionMismatch { partition: 0, graph: 0 });
    }
    let mut best = 0;
    let mut best_total = u64::MAX;
    for (i, p) in partitions.iter().enumerate() {
        let mut total = 0;
        for s in partitions {
            total += disagreement(p, s)?;
        }
        if total < best_total {
            best_total = total;
            best = i;
        }
    }
    Ok(partitions[best].clone())
}

/// Balls: nodes sorted by total distance; the pivot gathers the unclustered
/// nodes within distance 1/2, and the ball becomes a cluster iff the
/// average pivot distance is at most alpha, otherwise the pivot stays a
/// singleton.
pub fn aggregate_balls(partitions: &[Partition], alpha: f64) -> Result<Partition, SummaryError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(SummaryError::KOutOfRange(0, 0));
    }
    let oracle = DistanceOracle::new(partitions)?;
    let n = oracle.n();
    let q = oracle.q() as u64;
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.sort_by_key(|&u| (oracle.total_numerator(u), u));
    let mut assignment = vec![u32::MAX; n];
    let mut next_id = 0u32;
    for &pivot in &order {
        if assignment[pivot as usize] != u32::MAX {
            continue;
        }
        let ball: Vec<NodeId> = (0..n as NodeId)
            .filter(|&v| {
                v != pivot
                    && assignment[v as usize] == u32::MAX
                    && 2 * oracle.numerator(pivot, v) as u64 <= q
            })
            .collect();
        let total: u64 = ball.iter().map(|&v| oracle.numerator(pivot, v) as u64).sum();
        // average <= alpha, exact comparison: total / (q * |ball|) <= alpha
        let keep = ball.is_empty() || (total as f64) <= alpha * (q as f64 * ball.len() as f64);
        assignment[pivot as usize] = next_id;
        if keep {
            for &v in &ball {
                assignment[v as usize] = next_id;
            }
        }
        next_id += 1;
    }
    Ok(Partition::from_assignment(&assignment))
}

/// Agglomerative: merge the pair of groups with the smallest average
/// distance while that average is below 1/2.
pub fn aggregate_agglomerative(partitions: &[Partition]) -> Result<Partition, SummaryError> {
    let oracle = DistanceOracle::new(partitions)?;
    let n = oracle.n();
    let q = oracle.q() as u128;
    let mut groups: Vec<Vec<NodeId>> = (0..n as NodeId).map(|u| vec![u]).collect();
    loop {
        let mut best: Option<(u128, u128, usize, usize)> = None; // (num, den) of avg
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                let mut num = 0u128;
                for &a in &groups[i] {
                    for &b in &groups[j] {
                        num += oracle.numerator(a, b) as u128;
                    }
                }
                let den = q * groups[i].len() as u128 * groups[j].len() as u128;
                let better = match best {
                    None => true,
                    Some((bn, bd, _, _)) => num * bd < bn * den,
                };
                if better {
                    best = Some((num, den, i, j));
                }
            }
        }
        match best {
            Some((num, den, i, j)) if 2 * num < den => {
                let merged = groups.remove(j);
                groups[i].extend(merged);
                groups[i].sort_unstable();
            }
            _ => break,
        }
    }
    Ok(Partition::from_blocks(n, &groups))
}

/// Furthest: top-down; iteratively promote the node furthest from the
/// current centers to a new center, reassign, and keep going while the
/// correlation cost strictly improves.
pub fn aggregate_furthest(partitions: &[Partition]) -> Result<Partition, SummaryError> {
    let oracle = DistanceOracle::new(partitions)?;
    let n = oracle.n();
    if n == 0 {
        return Ok(Partition::from_assignment(&[]));
    }
    let mut best_partition = Partition::single_block(n);
    let mut best_cost = correlation_cost_with(&oracle, &best_partition);
    // furthest pair, ties to the lexicographically smallest pair
    let mut pair = (0u32, 1u32);
    let mut pair_d = 0u32;
    for u in 0..n as NodeId {
        for v in (u + 1)..n as NodeId {
            let d = oracle.numerator(u, v);
            if d > pair_d {
                pair_d = d;
                pair = (u, v);
            }
        }
    }
    if n == 1 {
        return Ok(best_partition);
    }
    let mut centers: Vec<NodeId> = vec![pair.0, pair.1];
    loop {
        // assign every node to its least-distance center, ties to the
        // earliest center
        let mut assignment = vec![0u32; n];
        for u in 0..n as NodeId {
            let mut best_c = 0u32;
            let mut best_d = u32::MAX;
            for (ci, &c) in centers.iter().enumerate() {
                let d = oracle.numerator(u, c);
                if d < best_d {
                    best_d = d;
                    best_c = ci as u32;
                }
            }
            assignment[u as usize] = best_c;
        }
        let candidate = Partition::from_assignment(&assignment);
        let cost = correlation_cost_with(&oracle, &candidate);
        if cost < best_cost {
            best_cost = cost;
            best_partition = candidate;
        } else {
            break;
        }
        if centers.len() == n {
            break;
        }
        // next center: the node furthest from the current centers
        let mut far = None;
        let mut far_d = 0u32;
        for u in 0..n as NodeId {
            if centers.contains(&u) {
                continue;
            }
            let d = centers.iter().map(|&c| oracle.numerator(u, c)).min().unwrap();
            if far.is_none() || d > far_d {
                far = Some(u);
                far_d = d;
            }
        }
        match far {
            Some(u) => centers.push(u),
            None => break,
        }
    }
    Ok(best_partition)
}

/// LocalSearch: sweep nodes in index order, applying the best of
/// {stay, move to another group, become a singleton}; stops after a full
/// pass without improvement or after `max_passes`.
pub fn aggregate_localsearch(
    partitions: &[Partition],
    init: &Partition,
    max_passes: usize,
) -> Result<Partition, SummaryError> {
    let oracle = DistanceOracle::new(partitions)?;
    let n = oracle.n();
    if init.n() != n {
        return Err(SummaryError::PartitionMismatch { partition: init.n(), graph: n });
    }
    let mut groups: Vec<Vec<NodeId>> = init.blocks().to_vec();
    for _ in 0..max_passes {
        let mut improved = false;
        for v in 0..n as NodeId {
            let cur = groups.iter().position(|g| g.contains(&v)).unwrap();
            // M(v, C_i) in q-scaled units, with v removed from its group
            let m: Vec<u64> = groups
                .iter()
                .map(|g| g.iter().filter(|&&u| u != v).map(|&u| oracle.numerator(v, u) as u64).sum())
                .collect();
            let sizes: Vec<u64> = groups
                .iter()
                .enumerate()
                .map(|(i, g)| if i == cur { (g.len() - 1) as u64 } else { g.len() as u64 })
                .collect();
            let q = oracle.q() as u64;
            let cross_all: u64 = (0..groups.len()).map(|j| sizes[j] * q - m[j]).sum();
            // cost of joining group i = M(v, C_i) + Σ_{j != i} (|C_j| - M(v, C_j))
            let cost_of = |i: usize| -> u64 { m[i] + (cross_all - (sizes[i] * q - m[i])) };
            let singleton_cost: u64 = cross_all;
            let mut best_choice = cur;
            let mut best_cost = cost_of(cur);
            for i in 0..groups.len() {
                if i != cur && cost_of(i) < best_cost {
                    best_cost = cost_of(i);
                    best_choice = i;
                }
            }
            let make_singleton = singleton_cost < best_cost && groups[cur].len() > 1;
            if make_singleton {
                groups[cur].retain(|&u| u != v);
                groups.push(vec![v]);
                improved = true;
            } else if best_choice != cur {
                groups[cur].retain(|&u| u != v);
                groups[best_choice].push(v);
                groups[best_choice].sort_unstable();
                improved = true;
            }
            groups.retain(|g| !g.is_empty());
        }
        if !improved {
            break;
        }
    }
    Ok(Partition::from_blocks(n, &groups))
}

/// Aggregator selection for the two-step pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Aggregator {
    Best,
    Balls { alpha: f64 },
    Agglomerative,
    Furthest,
    /// LocalSearch initialized with the Furthest output.
    LocalSearch { max_passes: usize },
}

impl Aggregator {
    pub fn run(&self, partitions: &[Partition]) -> Result<Partition, SummaryError> {
        match *self {
            Aggregator::Best => aggregate_best(partitions),
            Aggregator::Balls { alpha } => aggregate_balls(partitions, alpha),
            Aggregator::Agglomerative => aggregate_agglomerative(partitions),
            Aggregator::Furthest => aggregate_furthest(partitions),
            Aggregator::LocalSearch { max_passes } => {
                let init = aggregate_furthest(partitions)?;
                aggregate_localsearch(partitions, &init, max_passes)
            }
        }
    }
}

pub const DEFAULT_BALLS_ALPHA: f64 = 0.25;
pub const DEFAULT_LS_PASSES: usize = 50;
