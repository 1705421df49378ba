//! Lossless summaries: superedges plus correction lists, derived
//! deterministically from a partition.
//!
//! For a supernode pair (U, W) and relation r, let Π be the number of
//! candidate pairs (|U||W| for U ≠ W, |U|(|U|−1)/2 intra pairs for U = W)
//! and A the number of those pairs present as edges. Keeping the superedge
//! costs 1 + Π − A (the superedge plus C⁻ entries for the missing pairs),
//! dropping it costs A (C⁺ entries). The superedge is kept iff
//! 1 + Π − A ≤ A; under this rule the correction count per block is exactly
//! min(A, Π − A), which is the analytic quantity the approximation bounds
//! speak about.

use std::collections::HashMap;

use num_rational::Ratio;

use crate::error::SummaryError;
use crate::graph::{MultiRelationGraph, NodeId, RelationId, Triple};
use crate::partition::Partition;

/// A lossless summary: partition + superedges + correction lists.
///
/// Node and relation labels are copied from the source graph so a summary
/// is self-contained for persistence and query answering.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub node_labels: Vec<String>,
    pub relation_labels: Vec<String>,
    pub partition: Partition,
    /// (U, W, r) with U ≤ W, sorted
    pub superedges: Vec<(u32, u32, RelationId)>,
    /// edges of the graph not covered by a superedge, sorted
    pub c_plus: Vec<Triple>,
    /// non-edges covered by a superedge, sorted
    pub c_minus: Vec<Triple>,
    /// edge count of the source graph (denominator of relative size)
    pub m: u64,
}

/// Exact cost accounting for a summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostBreakdown {
    pub superedge_count: u64,
    pub plus_count: u64,
    pub minus_count: u64,
    pub m: u64,
}

impl CostBreakdown {
    pub fn total(&self) -> u64 {
        self.superedge_count + self.plus_count + self.minus_count
    }

    pub fn corrections(&self) -> u64 {
        self.plus_count + self.minus_count
    }

    pub fn relative_size(&self) -> f64 {
        if self.m == 0 {
            0.0
        } else {
            self.total() as f64 / self.m as f64
        }
    }
}

impl Summary {
    pub fn cost(&self) -> CostBreakdown {
        CostBreakdown {
            superedge_count: self.superedges.len() as u64,
            plus_count: self.c_plus.len() as u64,
            minus_count: self.c_minus.len() as u64,
            m: self.m,
        }
    }

    pub fn n(&self) -> usize {
        self.node_labels.len()
    }

    pub fn q(&self) -> usize {
        self.relation_labels.len()
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.node_labels.iter().position(|l| l == label).map(|i| i as NodeId)
    }
}

/// Number of candidate pairs between two supernodes (intra pairs for U = W).
fn pair_capacity(p: &Partition, bu: u32, bw: u32) -> u64 {
    if bu == bw {
        let s = p.members(bu).len() as u64;
        s * (s - 1) / 2
    } else {
        p.members(bu).len() as u64 * p.members(bw).len() as u64
    }
}

/// Edge counts |A_UW,r| for every supernode pair and relation that holds at
/// least one edge. Keys are (min block, max block, relation).
pub fn block_edge_counts(
    g: &MultiRelationGraph,
    p: &Partition,
) -> HashMap<(u32, u32, RelationId), u64> {
    let mut counts: HashMap<(u32, u32, RelationId), u64> = HashMap::new();
    for u in 0..g.n() as NodeId {
        let bu = p.block_of(u);
        for r in 0..g.q() as RelationId {
            for &v in g.neighbors(r, u) {
                if v <= u {
                    continue;
                }
                let bv = p.block_of(v);
                let key = if bu <= bv { (bu, bv, r) } else { (bv, bu, r) };
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Derives the minimum-cost summary for partition `p`: per supernode pair
/// and relation the superedge is kept iff 1 + Π − A ≤ A.
pub fn build_summary(g: &MultiRelationGraph, p: &Partition) -> Result<Summary, SummaryError> {
    p.check_covers(g)?;
    let counts = block_edge_counts(g, p);
    let mut superedges: Vec<(u32, u32, RelationId)> = Vec::new();
    let mut c_plus: Vec<Triple> = Vec::new();
    let mut c_minus: Vec<Triple> = Vec::new();

    for (&(bu, bw, r), &a) in counts.iter() {
        let cap = pair_capacity(p, bu, bw);
        debug_assert!(a <= cap);
        if 1 + cap - a <= a {
            superedges.push((bu, bw, r));
            if a < cap {
                // collect the missing pairs as C- entries
                if bu == bw {
                    let mem = p.members(bu);
                    for (i, &x) in mem.iter().enumerate() {
                        for &y in &mem[i + 1..] {
                            if !g.has_edge(x, y, r) {
                                c_minus.push((x, y, r));
                            }
                        }
                    }
                } else {
                    for &x in p.members(bu) {
                        for &y in p.members(bw) {
                            let (a1, a2) = if x < y { (x, y) } else { (y, x) };
                            if !g.has_edge(a1, a2, r) {
                                c_minus.push((a1, a2, r));
                            }
                        }
                    }
                }
            }
        }
    }

    // edges in blocks without a superedge go to C+
    let mut has_super: HashMap<(u32, u32, RelationId), bool> = HashMap::new();
    for &(bu, bw, r) in &superedges {
        has_super.insert((bu, bw, r), true);
    }
    for (u, v, r) in g.edges() {
        let (bu, bv) = (p.block_of(u), p.block_of(v));
        let key = if bu <= bv { (bu, bv, r) } else { (bv, bu, r) };
        if !has_super.contains_key(&key) {
            c_plus.push((u, v, r));
        }
    }

    superedges.sort_unstable();
    c_plus.sort_unstable();
    c_minus.sort_unstable();

    Ok(Summary {
        node_labels: g.node_labels().to_vec(),
        relation_labels: g.relation_labels().to_vec(),
        partition: p.clone(),
        superedges,
        c_plus,
        c_minus,
        m: g.m() as u64,
    })
}

/// Applies a foreign partition to `g` and returns the resulting cost;
/// the classification pipeline is built on this.
pub fn summarize_with_partition_cost(
    g: &MultiRelationGraph,
    p: &Partition,
) -> Result<CostBreakdown, SummaryError> {
    Ok(build_summary(g, p)?.cost())
}

/// Analytic correction count of Eq-style density arithmetic:
/// Σ_r Σ_pairs min(A, Π − A), over unordered supernode pairs including
/// self pairs with Π = |U|(|U|−1)/2. Equals the built summary's correction
/// count under the tie-keeps-superedge rule.
pub fn correction_size_formula(g: &MultiRelationGraph, p: &Partition) -> u64 {
    block_edge_counts(g, p)
        .iter()
        .map(|(&(bu, bw, _), &a)| {
            let cap = pair_capacity(p, bu, bw);
            a.min(cap - a)
        })
        .sum()
}

/// l1 reconstruction error RE₁ = Σ_r Σ_pairs 4·Π·α(1−α) with α = A/Π,
/// summed over unordered pairs (the ordered double-count is folded into the
/// factor). Exact rational.
pub fn l1_reconstruction_error(g: &MultiRelationGraph, p: &Partition) -> Ratio<i64> {
    let mut total = Ratio::new(0, 1);
    for (&(bu, bw, _), &a) in block_edge_counts(g, p).iter() {
        let cap = pair_capacity(p, bu, bw) as i64;
        let a = a as i64;
        if cap > 0 {
            total += Ratio::new(4 * a * (cap - a), cap);
        }
    }
    total
}

/// Rebuilds the exact graph: explode superedges, add C⁺, remove C⁻.
pub fn reconstruct(s: &Summary) -> Result<MultiRelationGraph, SummaryError> {
    let mut triples: Vec<Triple> = Vec::new();
    for &(bu, bw, r) in &s.superedges {
        if bu == bw {
            let mem = s.partition.members(bu);
            for (i, &x) in mem.iter().enumerate() {
                for &y in &mem[i + 1..] {
                    triples.push((x, y, r));
                }
            }
        } else {
            for &x in s.partition.members(bu) {
                for &y in s.partition.members(bw) {
                    triples.push(if x < y { (x, y, r) } else { (y, x, r) });
                }
            }
        }
    }
    triples.sort_unstable();
    triples.dedup();
    for &(u, v, r) in &s.c_plus {
        let t = if u < v { (u, v, r) } else { (v, u, r) };
        if let Err(pos) = triples.binary_search(&t) {
            triples.insert(pos, t);
        }
    }
    for &(u, v, r) in &s.c_minus {
        let t = if u < v { (u, v, r) } else { (v, u, r) };
        match triples.binary_search(&t) {
            Ok(pos) => {
                triples.remove(pos);
            }
            Err(_) => {
                return Err(SummaryError::UncoveredMinus { u: t.0, v: t.1, r: t.2 });
            }
        }
    }
    Ok(MultiRelationGraph::from_indexed(
        s.node_labels.clone(),
        s.relation_labels.clone(),
        &triples,
    ))
}

/// Outcome of a losslessness check; on failure lists the offending triples
/// in label form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LosslessReport {
    pub ok: bool,
    /// triples of the graph the reconstruction lacks
    pub missing: Vec<(String, String, String)>,
    /// triples the reconstruction invents
    pub extra: Vec<(String, String, String)>,
}

fn label_triples(g: &MultiRelationGraph) -> Vec<(String, String, String)> {
    let mut out: Vec<(String, String, String)> = g
        .edges()
        .into_iter()
        .map(|(u, v, r)| {
            let (lu, lv) = (g.node_label(u).to_string(), g.node_label(v).to_string());
            let (a, b) = if lu <= lv { (lu, lv) } else { (lv, lu) };
            (a, b, g.relation_label(r).to_string())
        })
        .collect();
    out.sort();
    out
}

/// True iff reconstruct(s) is set-equal to g's triple set.
pub fn verify_lossless(g: &MultiRelationGraph, s: &Summary) -> Result<LosslessReport, SummaryError> {
    let rebuilt = reconstruct(s)?;
    let want = label_triples(g);
    let got = label_triples(&rebuilt);
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < want.len() || j < got.len() {
        if j >= got.len() || (i < want.len() && want[i] < got[j]) {
            missing.push(want[i].clone());
            i += 1;
        } else if i >= want.len() || got[j] < want[i] {
            extra.push(got[j].clone());
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    Ok(LosslessReport { ok: missing.is_empty() && extra.is_empty(), missing, extra })
}
