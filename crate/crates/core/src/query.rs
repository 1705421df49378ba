//! Query answering directly on summaries, without full reconstruction.

use crate::error::{GraphError, SummaryError};
use crate::graph::{MultiRelationGraph, NodeId, RelationId};
use crate::partition::{LabeledPartition, Partition};
use crate::summary::{summarize_with_partition_cost, Summary};

/// Neighborhood of a node: the (neighbor, relation) pairs plus a
/// per-relation histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub node: NodeId,
    /// sorted (neighbor, relation) pairs
    pub entries: Vec<(NodeId, RelationId)>,
    /// histogram[r] = number of neighbors in relation r
    pub histogram: Vec<u64>,
}

/// Computes N_v from the summary alone: explode only the superedges
/// incident to v's supernode, add v's C⁺ triples, drop its C⁻ triples.
pub fn neighborhood(s: &Summary, v: NodeId) -> Result<Neighborhood, SummaryError> {
    if (v as usize) >= s.n() {
        return Err(GraphError::NodeOutOfRange(v as usize, s.n()).into());
    }
    let block = s.partition.block_of(v);
    let mut entries: Vec<(NodeId, RelationId)> = Vec::new();
    for &(bu, bw, r) in &s.superedges {
        if bu != block && bw != block {
            continue;
        }
        if bu == bw {
            // self-loop: v connects to every other member
            for &w in s.partition.members(bu) {
                if w != v {
                    entries.push((w, r));
                }
            }
        } else {
            let other = if bu == block { bw } else { bu };
            for &w in s.partition.members(other) {
                entries.push((w, r));
            }
        }
    }
    entries.sort_unstable();
    entries.dedup();
    for &(a, b, r) in &s.c_plus {
        let w = if a == v {
            b
        } else if b == v {
            a
        } else {
            continue;
        };
        if let Err(pos) = entries.binary_search(&(w, r)) {
            entries.insert(pos, (w, r));
        }
    }
    for &(a, b, r) in &s.c_minus {
        let w = if a == v {
            b
        } else if b == v {
            a
        } else {
            continue;
        };
        if let Ok(pos) = entries.binary_search(&(w, r)) {
            entries.remove(pos);
        }
    }
    let mut histogram = vec![0u64; s.q()];
    for &(_, r) in &entries {
        histogram[r as usize] += 1;
    }
    Ok(Neighborhood { node: v, entries, histogram })
}

/// Brute-force N_v by scanning an edge list; the oracle the summary-backed
/// answer is checked against.
pub fn neighborhood_by_scan(
    edges: &[(NodeId, NodeId, RelationId)],
    q: usize,
    v: NodeId,
) -> Neighborhood {
    let mut entries: Vec<(NodeId, RelationId)> = Vec::new();
    for &(a, b, r) in edges {
        if a == v {
            entries.push((b, r));
        } else if b == v {
            entries.push((a, r));
        }
    }
    entries.sort_unstable();
    entries.dedup();
    let mut histogram = vec![0u64; q];
    for &(_, r) in &entries {
        histogram[r as usize] += 1;
    }
    Neighborhood { node: v, entries, histogram }
}

/// Applies each candidate partition to `g` and returns the label of the
/// cheapest summary; ties go to the earliest candidate.
pub fn classify(
    g: &MultiRelationGraph,
    candidates: &[(String, LabeledPartition)],
) -> Result<(String, Vec<(String, u64)>), SummaryError> {
    assert!(!candidates.is_empty(), "at least one candidate required");
    let mut costs: Vec<(String, u64)> = Vec::with_capacity(candidates.len());
    for (label, lp) in candidates {
        let p: Partition = lp.apply_to(g)?;
        let c = summarize_with_partition_cost(g, &p)?;
        costs.push((label.clone(), c.total()));
    }
    let mut best = 0;
    for i in 1..costs.len() {
        if costs[i].1 < costs[best].1 {
            best = i;
        }
    }
    Ok((costs[best].0.clone(), costs))
}
