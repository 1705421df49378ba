use thiserror::Error;

/// Errors raised while loading or querying a multi-relation graph.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-edge on node '{node}'")]
    SelfEdge { line: usize, node: String },
    #[error("line {line}: unknown relation token")]
    UnknownRelation { line: usize },
    #[error("relation index {0} out of range (q = {1})")]
    RelationOutOfRange(usize, usize),
    #[error("node index {0} out of range (n = {1})")]
    NodeOutOfRange(usize, usize),
    #[error("unknown node label '{0}'")]
    UnknownNode(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors raised by summary construction, reconstruction, and persistence.
#[derive(Debug, Error)]
pub enum SummaryError {
    #[error("partition covers {partition} nodes but graph has {graph}")]
    PartitionMismatch { partition: usize, graph: usize },
    #[error("partition assigns node {node} to supernode {id}, but k = {k}")]
    InvalidAssignment { node: usize, id: u32, k: u32 },
    #[error("C- entry ({u}, {v}, {r}) is not covered by any superedge")]
    UncoveredMinus { u: u32, v: u32, r: u32 },
    #[error("summary file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("k = {0} out of range (n = {1})")]
    KOutOfRange(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
