//! Exact storage accounting for graphs, summaries, and per-relation
//! summary bundles ("ALL"), in both the plain triple format and the
//! relation-list format that folds repeated (node, node) pairs across
//! relations into one line.

use std::io::Write;

use rayon::prelude::*;

use crate::error::SummaryError;
use crate::graph::{GraphFormat, MultiRelationGraph};
use crate::single::kmedian_summarize;
use crate::summary::Summary;

pub fn graph_bytes(g: &MultiRelationGraph, format: GraphFormat) -> usize {
    g.to_bytes(format).len()
}

fn write_grouped<W: Write>(
    mut w: W,
    lines: &mut [(String, String, String)],
    format: GraphFormat,
) -> std::io::Result<()> {
    lines.sort();
    match format {
        GraphFormat::Triples => {
            for (a, b, r) in lines.iter() {
                writeln!(w, "{a} {b} {r}")?;
            }
        }
        GraphFormat::RelationList => {
            let mut i = 0;
            while i < lines.len() {
                let (a, b) = (&lines[i].0, &lines[i].1);
                let mut rels: Vec<&str> = Vec::new();
                let mut j = i;
                while j < lines.len() && &lines[j].0 == a && &lines[j].1 == b {
                    rels.push(&lines[j].2);
                    j += 1;
                }
                writeln!(w, "{a} {b} {}", rels.join(","))?;
                i = j;
            }
        }
    }
    Ok(())
}

/// Serialized size of the superedge section in the chosen format.
pub fn superedge_bytes(s: &Summary, format: GraphFormat) -> usize {
    let mut lines: Vec<(String, String, String)> = s
        .superedges
        .iter()
        .map(|&(u, v, r)| (u.to_string(), v.to_string(), s.relation_labels[r as usize].clone()))
        .collect();
    let mut out = Vec::new();
    write_grouped(&mut out, &mut lines, format).unwrap();
    out.len()
}

/// Serialized size of both correction lists in the chosen format.
pub fn correction_bytes(s: &Summary, format: GraphFormat) -> usize {
    let mut total = 0;
    for list in [&s.c_plus, &s.c_minus] {
        let mut lines: Vec<(String, String, String)> = list
            .iter()
            .map(|&(u, v, r)| {
                (
                    s.node_labels[u as usize].clone(),
                    s.node_labels[v as usize].clone(),
                    s.relation_labels[r as usize].clone(),
                )
            })
            .collect();
        let mut out = Vec::new();
        write_grouped(&mut out, &mut lines, format).unwrap();
        total += out.len();
    }
    total
}

/// Serialized size of the node → supernode mapping ("label id" lines).
pub fn mapping_bytes(s: &Summary) -> usize {
    let mut out = Vec::new();
    for (u, label) in s.node_labels.iter().enumerate() {
        writeln!(out, "{} {}", label, s.partition.block_of(u as u32)).unwrap();
    }
    out.len()
}

/// Exact serialized byte size of a summary in the chosen format; one
/// mapping for a uniform summary.
pub fn summary_bytes(s: &Summary, format: GraphFormat, include_mapping: bool) -> usize {
    let mut total = superedge_bytes(s, format) + correction_bytes(s, format);
    if include_mapping {
        total += mapping_bytes(s);
    }
    total
}

/// The ALL baseline: an individually optimal (k-median) summary per
/// relation. With `k = None` each relation's k comes from Greedy on that
/// relation's view.
pub fn all_relations_bundle(
    g: &MultiRelationGraph,
    k: Option<usize>,
    seed: u64,
) -> Result<Vec<(String, Summary)>, SummaryError> {
    (0..g.q())
        .into_par_iter()
        .map(|r| {
            let view = g.relation_view(r)?;
            let label = g.relation_label(r as u32).to_string();
            let rel_k = match k {
                Some(k) => k.min(g.n()),
                None => crate::single::greedy_partition(&view, None)?.k(),
            };
            let s = kmedian_summarize(&view, rel_k.max(1), seed.wrapping_add(r as u64))?;
            Ok((label, s))
        })
        .collect()
}

/// Bundle storage: every member carries its own mapping (q mappings total).
pub fn bundle_bytes(bundle: &[(String, Summary)], format: GraphFormat) -> usize {
    bundle.iter().map(|(_, s)| summary_bytes(s, format, true)).sum()
}

pub fn bundle_mapping_bytes(bundle: &[(String, Summary)]) -> usize {
    bundle.iter().map(|(_, s)| mapping_bytes(s)).sum()
}

/// Writes a bundle as one file with a `[RELATION <label>]` banner before
/// each member summary.
pub fn write_bundle<W: Write>(bundle: &[(String, Summary)], mut w: W) -> std::io::Result<()> {
    for (label, s) in bundle {
        writeln!(w, "[RELATION {label}]")?;
        crate::summary_io::write_summary(s, &mut w)?;
    }
    Ok(())
}
