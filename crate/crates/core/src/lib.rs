//! Lossless summarization of multi-relation graphs.
//!
//! A summary is a node partition into supernodes together with superedges
//! and the correction lists (C⁺, C⁻) needed to reconstruct the input graph
//! exactly. This crate provides the graph model, the summary model with
//! exact cost accounting, single-relation summarizers (Greedy, Randomized,
//! SWeG, k-median), partition aggregation for the two-step pipeline,
//! holistic multi-relation summarizers (Greedy+, Randomized+, k-Median+,
//! Hybrid), supernode-count selection, summary-backed query answering,
//! storage accounting, and a brute-force oracle for small instances.

pub mod aggregate;
pub mod engine;
pub mod error;
pub mod graph;
pub mod holistic;
pub mod kmedian;
pub mod kselect;
pub mod oracle;
pub mod partition;
pub mod query;
pub mod single;
pub mod storage;
pub mod summary;
pub mod summary_io;
pub mod synth;

pub use error::{GraphError, SummaryError};
pub use graph::{GraphFormat, MultiRelationGraph, NodeId, RelationId, SingleRelationView, Triple};
pub use partition::{LabeledPartition, Partition};
pub use summary::{
    build_summary, correction_size_formula, l1_reconstruction_error, reconstruct,
    summarize_with_partition_cost, verify_lossless, CostBreakdown, Summary,
};
