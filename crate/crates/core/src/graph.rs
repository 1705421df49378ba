//! Multi-relation graphs as per-relation sorted adjacency lists.
//!
//! Nodes and relations carry arbitrary string labels; dense indices are
//! assigned in first-appearance order so that loading is deterministic and
//! downstream tie-breaking is stable. Edges are undirected triples
//! `(u, v, r)` with `u != v`, stored canonically with `u < v`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::GraphError;

pub type NodeId = u32;
pub type RelationId = u32;

/// An edge triple in canonical form (`u < v`).
pub type Triple = (NodeId, NodeId, RelationId);

/// Text encodings for graphs. `Triples` is one `u v r` line per edge;
/// `RelationList` groups the relations of a node pair into one line
/// `u v r1,r2,...,rk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Triples,
    RelationList,
}

#[derive(Debug, Clone)]
pub struct MultiRelationGraph {
    node_labels: Vec<String>,
    node_index: HashMap<String, NodeId>,
    relation_labels: Vec<String>,
    relation_index: HashMap<String, RelationId>,
    /// adjacency[r][u] = sorted neighbor list of u in relation r
    adjacency: Vec<Vec<Vec<NodeId>>>,
    edge_count: usize,
}

impl MultiRelationGraph {
    pub fn n(&self) -> usize {
        self.node_labels.len()
    }

    pub fn q(&self) -> usize {
        self.relation_labels.len()
    }

    /// Total number of edge triples, m = Σ_r |E_r|.
    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn node_label(&self, u: NodeId) -> &str {
        &self.node_labels[u as usize]
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn relation_label(&self, r: RelationId) -> &str {
        &self.relation_labels[r as usize]
    }

    pub fn relation_labels(&self) -> &[String] {
        &self.relation_labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.node_index.get(label).copied()
    }

    pub fn relation_id(&self, label: &str) -> Option<RelationId> {
        self.relation_index.get(label).copied()
    }

    pub fn neighbors(&self, r: RelationId, u: NodeId) -> &[NodeId] {
        &self.adjacency[r as usize][u as usize]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId, r: RelationId) -> bool {
        self.adjacency[r as usize][u as usize].binary_search(&v).is_ok()
    }

    /// Degree of u summed over all relations.
    pub fn degree(&self, u: NodeId) -> usize {
        (0..self.q()).map(|r| self.adjacency[r][u as usize].len()).sum()
    }

    pub fn edge_count_in(&self, r: RelationId) -> usize {
        self.adjacency[r as usize].iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// Canonical triples, sorted by (u, v, r) with u < v.
    pub fn edges(&self) -> Vec<Triple> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n() as NodeId {
            for r in 0..self.q() as RelationId {
                for &v in self.neighbors(r, u) {
                    if u < v {
                        out.push((u, v, r));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn relation_view(&self, r: usize) -> Result<SingleRelationView<'_>, GraphError> {
        if r >= self.q() {
            return Err(GraphError::RelationOutOfRange(r, self.q()));
        }
        Ok(SingleRelationView { graph: self, relation: r as RelationId })
    }

    /// Sparse row of the concatenated adjacency matrix (A_1 | ... | A_q):
    /// column r·n + w is set iff (u, w, r) is an edge.
    pub fn concatenated_row(&self, u: usize) -> Result<AdjacencyRow, GraphError> {
        if u >= self.n() {
            return Err(GraphError::NodeOutOfRange(u, self.n()));
        }
        let n = self.n() as u32;
        let mut columns = Vec::with_capacity(self.degree(u as NodeId));
        for r in 0..self.q() as RelationId {
            let base = r * n;
            columns.extend(self.neighbors(r, u as NodeId).iter().map(|&w| base + w));
        }
        Ok(AdjacencyRow { owner: u as NodeId, relation: None, columns })
    }

    pub fn from_triples<S: AsRef<str>>(edges: &[(S, S, S)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new();
        for (i, (u, v, r)) in edges.iter().enumerate() {
            b.add_edge(u.as_ref(), v.as_ref(), r.as_ref(), i + 1)?;
        }
        Ok(b.finish())
    }

    /// Builds a graph over a fixed node/relation universe from index
    /// triples; preserves isolated nodes. Triples must be u != v and in
    /// range; duplicates and reversed duplicates are deduplicated.
    pub fn from_indexed(
        node_labels: Vec<String>,
        relation_labels: Vec<String>,
        triples: &[Triple],
    ) -> Self {
        let n = node_labels.len();
        let q = relation_labels.len();
        let mut edges: Vec<Triple> = triples
            .iter()
            .map(|&(u, v, r)| if u < v { (u, v, r) } else { (v, u, r) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![vec![Vec::new(); n]; q];
        for &(u, v, r) in &edges {
            adjacency[r as usize][u as usize].push(v);
            adjacency[r as usize][v as usize].push(u);
        }
        for rel in &mut adjacency {
            for list in rel.iter_mut() {
                list.sort_unstable();
            }
        }
        let node_index =
            node_labels.iter().enumerate().map(|(i, l)| (l.clone(), i as NodeId)).collect();
        let relation_index =
            relation_labels.iter().enumerate().map(|(i, l)| (l.clone(), i as RelationId)).collect();
        MultiRelationGraph {
            node_labels,
            node_index,
            relation_labels,
            relation_index,
            adjacency,
            edge_count: edges.len(),
        }
    }

    pub fn load<R: BufRead>(reader: R, format: GraphFormat) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let mut tok = text.split_whitespace();
            let (u, v, rest) = match (tok.next(), tok.next(), tok.next(), tok.next()) {
                (Some(u), Some(v), Some(r), None) => (u, v, r),
                _ => {
                    return Err(GraphError::Parse {
                        line: lineno,
                        msg: format!("expected 3 whitespace-separated tokens, got '{text}'"),
                    })
                }
            };
            match format {
                GraphFormat::Triples => b.add_edge(u, v, rest, lineno)?,
                GraphFormat::RelationList => {
                    for r in rest.split(',') {
                        if r.is_empty() {
                            return Err(GraphError::UnknownRelation { line: lineno });
                        }
                        b.add_edge(u, v, r, lineno)?;
                    }
                }
            }
        }
        Ok(b.finish())
    }

    pub fn write<W: Write>(&self, mut w: W, format: GraphFormat) -> std::io::Result<()> {
        match format {
            GraphFormat::Triples => {
                for (u, v, r) in self.edges() {
                    writeln!(
                        w,
                        "{} {} {}",
                        self.node_label(u),
                        self.node_label(v),
                        self.relation_label(r)
                    )?;
                }
            }
            GraphFormat::RelationList => {
                let mut edges = self.edges();
                edges.sort_unstable_by_key(|&(u, v, r)| (u, v, r));
                let mut i = 0;
                while i < edges.len() {
                    let (u, v, _) = edges[i];
                    let mut rels = Vec::new();
                    while i < edges.len() && edges[i].0 == u && edges[i].1 == v {
                        rels.push(self.relation_label(edges[i].2));
                        i += 1;
                    }
                    writeln!(w, "{} {} {}", self.node_label(u), self.node_label(v), rels.join(","))?;
                }
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self, format: GraphFormat) -> Vec<u8> {
        let mut out = Vec::new();
        self.write(&mut out, format).expect("writing to Vec cannot fail");
        out
    }
}

/// Read-only view of one relation, sharing node indexing with the parent.
#[derive(Clone, Copy)]
pub struct SingleRelationView<'g> {
    graph: &'g MultiRelationGraph,
    relation: RelationId,
}

impl<'g> SingleRelationView<'g> {
    pub fn relation(&self) -> RelationId {
        self.relation
    }

    pub fn graph(&self) -> &'g MultiRelationGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count_in(self.relation)
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.graph.neighbors(self.relation, u)
    }

    /// The view as a standalone single-relation graph (shared node labels).
    pub fn to_graph(&self) -> MultiRelationGraph {
        let n = self.n();
        let adjacency = vec![self.graph.adjacency[self.relation as usize].clone()];
        MultiRelationGraph {
            node_labels: self.graph.node_labels.clone(),
            node_index: self.graph.node_index.clone(),
            relation_labels: vec![self.graph.relation_labels[self.relation as usize].clone()],
            relation_index: HashMap::from([(
                self.graph.relation_labels[self.relation as usize].clone(),
                0,
            )]),
            adjacency,
            edge_count: (0..n)
                .map(|u| self.graph.adjacency[self.relation as usize][u].len())
                .sum::<usize>()
                / 2,
        }
    }
}

/// One sparse adjacency row; `relation = None` marks a concatenated row
/// with columns in `[0, n·q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyRow {
    pub owner: NodeId,
    pub relation: Option<RelationId>,
    /// strictly increasing column indices
    pub columns: Vec<u32>,
}

impl AdjacencyRow {
    /// Restrict a concatenated row to the block of relation r, yielding
    /// plain node indices.
    pub fn block(&self, r: RelationId, n: usize) -> Vec<NodeId> {
        let lo = r * n as u32;
        let hi = lo + n as u32;
        self.columns
            .iter()
            .filter(|&&c| c >= lo && c < hi)
            .map(|&c| c - lo)
            .collect()
    }
}

/// Access to a bag of relations over a shared node set; this is what the
/// merge engine and k-median operate on, so single-relation views and whole
/// graphs run through identical code.
pub trait RelationSet {
    fn node_count(&self) -> usize;
    fn relation_count(&self) -> usize;
    fn rel_neighbors(&self, r: usize, u: NodeId) -> &[NodeId];

    fn total_edges(&self) -> usize {
        let mut total = 0;
        for r in 0..self.relation_count() {
            for u in 0..self.node_count() {
                total += self.rel_neighbors(r, u as NodeId).len();
            }
        }
        total / 2
    }
}

impl RelationSet for MultiRelationGraph {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn relation_count(&self) -> usize {
        self.q()
    }

    fn rel_neighbors(&self, r: usize, u: NodeId) -> &[NodeId] {
        &self.adjacency[r][u as usize]
    }
}

impl<'g> RelationSet for SingleRelationView<'g> {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn relation_count(&self) -> usize {
        1
    }

    fn rel_neighbors(&self, _r: usize, u: NodeId) -> &[NodeId] {
        self.neighbors(u)
    }
}

struct GraphBuilder {
    node_labels: Vec<String>,
    node_index: HashMap<String, NodeId>,
    relation_labels: Vec<String>,
    relation_index: HashMap<String, RelationId>,
    edges: Vec<Triple>,
}

impl GraphBuilder {
    fn new() -> Self {
        GraphBuilder {
            node_labels: Vec::new(),
            node_index: HashMap::new(),
            relation_labels: Vec::new(),
            relation_index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    fn intern_node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.node_index.get(label) {
            return id;
        }
        let id = self.node_labels.len() as NodeId;
        self.node_labels.push(label.to_string());
        self.node_index.insert(label.to_string(), id);
        id
    }

    fn intern_relation(&mut self, label: &str) -> RelationId {
        if let Some(&id) = self.relation_index.get(label) {
            return id;
        }
        let id = self.relation_labels.len() as RelationId;
        self.relation_labels.push(label.to_string());
        self.relation_index.insert(label.to_string(), id);
        id
    }

    fn add_edge(&mut self, u: &str, v: &str, r: &str, lineno: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfEdge { line: lineno, node: u.to_string() });
        }
        let ui = self.intern_node(u);
        let vi = self.intern_node(v);
        let ri = self.intern_relation(r);
        let (a, b) = if ui < vi { (ui, vi) } else { (vi, ui) };
        self.edges.push((a, b, ri));
        Ok(())
    }

    fn finish(mut self) -> MultiRelationGraph {
        self.edges.sort_unstable();
        self.edges.dedup();
        let n = self.node_labels.len();
        let q = self.relation_labels.len();
        let mut adjacency = vec![vec![Vec::new(); n]; q];
        for &(u, v, r) in &self.edges {
            adjacency[r as usize][u as usize].push(v);
            adjacency[r as usize][v as usize].push(u);
        }
        for rel in &mut adjacency {
            for list in rel.iter_mut() {
                list.sort_unstable();
            }
        }
        MultiRelationGraph {
            node_labels: self.node_labels,
            node_index: self.node_index,
            relation_labels: self.relation_labels,
            relation_index: self.relation_index,
            adjacency,
            edge_count: self.edges.len(),
        }
    }
}
