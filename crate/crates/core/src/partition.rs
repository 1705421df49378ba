//! Node partitions: the sole free variable of summarization.

use std::collections::HashMap;

use crate::error::SummaryError;
use crate::graph::{MultiRelationGraph, NodeId};

/// A partition of the node set into supernodes with contiguous ids.
///
/// Canonical form: supernodes are numbered by their minimum member in
/// ascending order, so two equal partitions always compare equal and
/// serialized output is byte-stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<u32>,
    members: Vec<Vec<NodeId>>,
}

impl Partition {
    /// Builds a partition from a raw node → block-id map, renumbering
    /// blocks canonically (by minimum member).
    pub fn from_assignment(raw: &[u32]) -> Self {
        let mut first_seen: HashMap<u32, u32> = HashMap::new();
        let mut reps: Vec<(NodeId, u32)> = Vec::new();
        for (node, &id) in raw.iter().enumerate() {
            first_seen.entry(id).or_insert_with(|| {
                reps.push((node as NodeId, id));
                (reps.len() - 1) as u32
            });
        }
        // reps is in first-member order, which for min-member canonical
        // numbering is exactly ascending minimum member.
        let mut remap: HashMap<u32, u32> = HashMap::new();
        for (new_id, &(_, old)) in reps.iter().enumerate() {
            remap.insert(old, new_id as u32);
        }
        let assignment: Vec<u32> = raw.iter().map(|id| remap[id]).collect();
        let mut members = vec![Vec::new(); reps.len()];
        for (node, &id) in assignment.iter().enumerate() {
            members[id as usize].push(node as NodeId);
        }
        Partition { assignment, members }
    }

    /// Every node its own supernode.
    pub fn identity(n: usize) -> Self {
        Partition::from_assignment(&(0..n as u32).collect::<Vec<_>>())
    }

    /// All nodes in one supernode.
    pub fn single_block(n: usize) -> Self {
        Partition::from_assignment(&vec![0; n])
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<NodeId>]) -> Self {
        let mut raw = vec![u32::MAX; n];
        for (id, block) in blocks.iter().enumerate() {
            for &node in block {
                raw[node as usize] = id as u32;
            }
        }
        assert!(raw.iter().all(|&id| id != u32::MAX), "blocks must cover all nodes");
        Partition::from_assignment(&raw)
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn block_of(&self, u: NodeId) -> u32 {
        self.assignment[u as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Member nodes of supernode `id`, ascending.
    pub fn members(&self, id: u32) -> &[NodeId] {
        &self.members[id as usize]
    }

    pub fn blocks(&self) -> &[Vec<NodeId>] {
        &self.members
    }

    pub fn same_block(&self, u: NodeId, v: NodeId) -> bool {
        self.assignment[u as usize] == self.assignment[v as usize]
    }

    /// Checks that this partition covers exactly the nodes of `g`.
    pub fn check_covers(&self, g: &MultiRelationGraph) -> Result<(), SummaryError> {
        if self.n() != g.n() {
            return Err(SummaryError::PartitionMismatch { partition: self.n(), graph: g.n() });
        }
        Ok(())
    }
}

/// A partition keyed by node label, for applying a partition built on one
/// graph to another graph sharing the node set.
#[derive(Debug, Clone)]
pub struct LabeledPartition {
    pub entries: Vec<(String, u32)>,
}

impl LabeledPartition {
    pub fn from_partition(p: &Partition, labels: &[String]) -> Self {
        let entries =
            labels.iter().enumerate().map(|(u, l)| (l.clone(), p.block_of(u as u32))).collect();
        LabeledPartition { entries }
    }

    /// Re-indexes the labeled assignment against g's node numbering.
    pub fn apply_to(&self, g: &MultiRelationGraph) -> Result<Partition, SummaryError> {
        let mut raw = vec![u32::MAX; g.n()];
        for (label, id) in &self.entries {
            let node = g
                .node_id(label)
                .ok_or_else(|| crate::error::GraphError::UnknownNode(label.clone()))?;
            raw[node as usize] = *id;
        }
        if let Some(missing) = raw.iter().position(|&id| id == u32::MAX) {
            return Err(crate::error::GraphError::UnknownNode(
                g.node_label(missing as u32).to_string(),
            )
            .into());
        }
        Ok(Partition::from_assignment(&raw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_renumbering() {
        let p = Partition::from_assignment(&[7, 3, 7, 1]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.k(), 3);
        assert_eq!(p.members(0), &[0, 2]);
    }

    #[test]
    fn identity_and_single() {
        assert_eq!(Partition::identity(4).k(), 4);
        assert_eq!(Partition::single_block(4).k(), 1);
    }

    #[test]
    fn block_constructor_matches_assignment() {
        let p = Partition::from_blocks(5, &[vec![1, 3], vec![0, 2, 4]]);
        assert_eq!(p.assignment(), &[0, 1, 0, 1, 0]);
    }
}
