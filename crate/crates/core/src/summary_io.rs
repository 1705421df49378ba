//! Text persistence for summaries.
//!
//! Sections: `[MAPPING]` ("node supernode" lines in node order),
//! `[SUPEREDGES]` ("U W r"), `[CPLUS]` / `[CMINUS]` ("u v r"); `#` starts a
//! comment. Lines within a section are sorted with relation labels as the
//! final key, so output is byte-stable regardless of internal relation
//! numbering.

use std::io::{BufRead, Write};

use crate::error::SummaryError;
use crate::graph::Triple;
use crate::partition::Partition;
use crate::summary::Summary;

pub fn write_summary<W: Write>(s: &Summary, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# mrgs summary v1")?;
    writeln!(w, "[MAPPING]")?;
    for (u, label) in s.node_labels.iter().enumerate() {
        writeln!(w, "{} {}", label, s.partition.block_of(u as u32))?;
    }
    writeln!(w, "[SUPEREDGES]")?;
    let mut superedges: Vec<(u32, u32, &str)> = s
        .superedges
        .iter()
        .map(|&(u, v, r)| (u, v, s.relation_labels[r as usize].as_str()))
        .collect();
    superedges.sort_unstable();
    for (u, v, r) in superedges {
        writeln!(w, "{u} {v} {r}")?;
    }
    let correction_lines = |list: &[Triple]| {
        let mut lines: Vec<(u32, u32, &str)> = list
            .iter()
            .map(|&(u, v, r)| (u, v, s.relation_labels[r as usize].as_str()))
            .collect();
        lines.sort_unstable();
        lines
    };
    writeln!(w, "[CPLUS]")?;
    for (u, v, r) in correction_lines(&s.c_plus) {
        writeln!(w, "{} {} {}", s.node_labels[u as usize], s.node_labels[v as usize], r)?;
    }
    writeln!(w, "[CMINUS]")?;
    for (u, v, r) in correction_lines(&s.c_minus) {
        writeln!(w, "{} {} {}", s.node_labels[u as usize], s.node_labels[v as usize], r)?;
    }
    Ok(())
}

pub fn summary_to_bytes(s: &Summary) -> Vec<u8> {
    let mut out = Vec::new();
    write_summary(s, &mut out).expect("writing to Vec cannot fail");
    out
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    None,
    Mapping,
    Superedges,
    CPlus,
    CMinus,
}

pub fn read_summary<R: BufRead>(reader: R) -> Result<Summary, SummaryError> {
    let mut section = Section::None;
    let mut node_labels: Vec<String> = Vec::new();
    let mut node_index: std::collections::HashMap<String, u32> = std::collections::HashMap::new();
    let mut assignment: Vec<u32> = Vec::new();
    let mut relation_labels: Vec<String> = Vec::new();
    let mut relation_index: std::collections::HashMap<String, u32> =
        std::collections::HashMap::new();
    let mut superedges: Vec<(u32, u32, u32)> = Vec::new();
    let mut c_plus: Vec<Triple> = Vec::new();
    let mut c_minus: Vec<Triple> = Vec::new();

    let intern_rel = |labels: &mut Vec<String>,
                          index: &mut std::collections::HashMap<String, u32>,
                          label: &str| {
        if let Some(&id) = index.get(label) {
            return id;
        }
        let id = labels.len() as u32;
        labels.push(label.to_string());
        index.insert(label.to_string(), id);
        id
    };

    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(SummaryError::Io)?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        match text {
            "[MAPPING]" => {
                section = Section::Mapping;
                continue;
            }
            "[SUPEREDGES]" => {
                section = Section::Superedges;
                continue;
            }
            "[CPLUS]" => {
                section = Section::CPlus;
                continue;
            }
            "[CMINUS]" => {
                section = Section::CMinus;
                continue;
            }
            _ => {}
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        let parse_err = |msg: &str| SummaryError::Parse { line: lineno, msg: msg.to_string() };
        match section {
            Section::None => return Err(parse_err("content before any section header")),
            Section::Mapping => {
                if toks.len() != 2 {
                    return Err(parse_err("expected 'node supernode'"));
                }
                let id: u32 =
                    toks[1].parse().map_err(|_| parse_err("supernode id is not an integer"))?;
                if node_index.contains_key(toks[0]) {
                    return Err(parse_err("duplicate node in mapping"));
                }
                node_index.insert(toks[0].to_string(), node_labels.len() as u32);
                node_labels.push(toks[0].to_string());
                assignment.push(id);
            }
            Section::Superedges => {
                if toks.len() != 3 {
                    return Err(parse_err("expected 'U W relation'"));
                }
                let u: u32 = toks[0].parse().map_err(|_| parse_err("bad supernode id"))?;
                let v: u32 = toks[1].parse().map_err(|_| parse_err("bad supernode id"))?;
                let r = intern_rel(&mut relation_labels, &mut relation_index, toks[2]);
                superedges.push((u.min(v), u.max(v), r));
            }
            Section::CPlus | Section::CMinus => {
                if toks.len() != 3 {
                    return Err(parse_err("expected 'u v relation'"));
                }
                let u = *node_index
                    .get(toks[0])
                    .ok_or_else(|| parse_err("correction references unmapped node"))?;
                let v = *node_index
                    .get(toks[1])
                    .ok_or_else(|| parse_err("correction references unmapped node"))?;
                let r = intern_rel(&mut relation_labels, &mut relation_index, toks[2]);
                let t = (u.min(v), u.max(v), r);
                if section == Section::CPlus {
                    c_plus.push(t);
                } else {
                    c_minus.push(t);
                }
            }
        }
    }
    let partition = Partition::from_assignment(&assignment);
    let k = partition.k() as u32;
    for (u, v, _) in &superedges {
        if *u >= k || *v >= k {
            return Err(SummaryError::InvalidAssignment { node: 0, id: (*u).max(*v), k });
        }
    }
    superedges.sort_unstable();
    c_plus.sort_unstable();
    c_minus.sort_unstable();
    // m is not stored in the file; reconstruct it from the contents
    let mut m: i64 = c_plus.len() as i64 - c_minus.len() as i64;
    for &(bu, bw, _) in &superedges {
        m += if bu == bw {
            let s = partition.members(bu).len() as i64;
            s * (s - 1) / 2
        } else {
            partition.members(bu).len() as i64 * partition.members(bw).len() as i64
        };
    }
    Ok(Summary {
        node_labels,
        relation_labels,
        partition,
        superedges,
        c_plus,
        c_minus,
        m: m.max(0) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiRelationGraph;
    use crate::summary::{build_summary, verify_lossless};

    fn sample() -> (MultiRelationGraph, Summary) {
        let g = MultiRelationGraph::from_triples(&[
            ("a", "b", "r2"),
            ("a", "c", "r1"),
            ("b", "c", "r1"),
            ("a", "d", "r1"),
            ("c", "d", "r2"),
        ])
        .unwrap();
        let p = Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]);
        let s = build_summary(&g, &p).unwrap();
        (g, s)
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let (_, s) = sample();
        let bytes = summary_to_bytes(&s);
        let s2 = read_summary(&bytes[..]).unwrap();
        assert_eq!(summary_to_bytes(&s2), bytes);
    }

    #[test]
    fn reconstruct_after_reload_is_lossless() {
        let (g, s) = sample();
        let s2 = read_summary(&summary_to_bytes(&s)[..]).unwrap();
        assert_eq!(s2.m, g.m() as u64);
        assert!(verify_lossless(&g, &s2).unwrap().ok);
    }

    #[test]
    fn parse_error_carries_line_number() {
        let text = "[MAPPING]\na 0\nb zero\n";
        match read_summary(text.as_bytes()) {
            Err(SummaryError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn content_before_header_rejected() {
        assert!(read_summary("a 0\n".as_bytes()).is_err());
    }
}
