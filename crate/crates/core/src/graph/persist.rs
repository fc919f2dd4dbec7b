//! Line-oriented graph file.
//!
//! ```text
//! N <layer> <key>
//! E <src-layer> <src-key> <dst-layer> <dst-key> <kind> <weight>
//! ```
//!
//! Keys are percent-escaped so they never contain whitespace. Weights are
//! written as the shortest decimal that parses back to the same `f64`. Node
//! lines come first, in node order, followed by edge lines in
//! `(src, dst, kind)` order, which makes save -> load -> save byte-identical.

use std::collections::BTreeSet;
use std::io::{self, Write};

use super::{EdgeKind, EdgeSet, GraphBuilder, GraphError, Layer, MultilayerGraph, NodeRef};
use crate::textfmt::{escape_key, unescape_key};

pub fn write_graph<W: Write>(graph: &MultilayerGraph, out: &mut W) -> io::Result<()> {
    for node in graph.nodes() {
        writeln!(out, "N {} {}", node.layer(), escape_key(node.key()))?;
    }
    for (src, dst, kind, weight) in graph.edges() {
        writeln!(
            out,
            "E {} {} {} {} {} {}",
            src.layer(),
            escape_key(src.key()),
            dst.layer(),
            escape_key(dst.key()),
            kind,
            weight
        )?;
    }
    Ok(())
}

fn parse_node(layer: &str, key: &str, line: usize) -> Result<NodeRef, GraphError> {
    let err = |message: String| GraphError::Parse { line, message };
    let layer: Layer = layer.parse().map_err(|e: GraphError| err(e.to_string()))?;
    let key = unescape_key(key).ok_or_else(|| err(format!("bad escape in key {key:?}")))?;
    NodeRef::from_parts(layer, &key).map_err(|e| err(e.to_string()))
}

/// Parses a graph file. Blank lines and `#` comments are ignored.
pub fn read_graph(text: &str) -> Result<MultilayerGraph, GraphError> {
    let mut declared: BTreeSet<NodeRef> = BTreeSet::new();
    let mut pending: Vec<(usize, NodeRef, NodeRef, EdgeKind, f64)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| GraphError::Parse { line, message };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            ["N", layer, key] => {
                let node = parse_node(layer, key, line)?;
                if !declared.insert(node.clone()) {
                    return Err(err(format!("node {node} declared twice")));
                }
            }
            ["E", sl, sk, dl, dk, kind, weight] => {
                let src = parse_node(sl, sk, line)?;
                let dst = parse_node(dl, dk, line)?;
                let kind: EdgeKind = kind.parse().map_err(|e: GraphError| err(e.to_string()))?;
                if (src.layer(), dst.layer()) != kind.endpoints() {
                    return Err(err(format!("{kind} edge cannot join {src} and {dst}")));
                }
                let weight: f64 = weight
                    .parse()
                    .map_err(|_| err(format!("bad weight {weight:?}")))?;
                if !(weight.is_finite() && weight > 0.0) {
                    return Err(err(format!(
                        "edge weight must be finite and positive, got {weight}"
                    )));
                }
                pending.push((line, src, dst, kind, weight));
            }
            _ => {
                return Err(err(format!("unrecognized line {trimmed:?}")));
            }
        }
    }

    let mut set = EdgeSet::new();
    for node in &declared {
        set.add_node(node.clone());
    }
    for (line, src, dst, kind, weight) in pending {
        let err = |message: String| GraphError::Parse { line, message };
        for endpoint in [&src, &dst] {
            if !declared.contains(endpoint) {
                return Err(err(format!("edge endpoint {endpoint} has no N line")));
            }
        }
        if set.weight(&src, &dst, kind).is_some() {
            return Err(err(format!("duplicate {kind} edge {src} -> {dst}")));
        }
        set.add_edge(src, dst, kind, weight);
    }
    let mut builder = GraphBuilder::new();
    builder.merge(set);
    Ok(builder.freeze())
}
