use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeKind, NodeRef};

/// Nodes and weighted edges produced by one builder step. Parallel edges of
/// the same kind are merged by summing their weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeSet {
    nodes: BTreeSet<NodeRef>,
    edges: BTreeMap<(NodeRef, NodeRef, EdgeKind), f64>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: NodeRef) {
        self.nodes.insert(node);
    }

    /// Adds `weight` to the `(src, dst, kind)` edge, creating it and both
    /// endpoints as needed.
    ///
    /// Panics if the endpoint layers do not match `kind`, or if `weight` is
    /// not finite and positive.
    pub fn add_edge(&mut self, src: NodeRef, dst: NodeRef, kind: EdgeKind, weight: f64) {
        assert_eq!(
            (src.layer(), dst.layer()),
            kind.endpoints(),
            "{kind} edge between {src} and {dst}"
        );
        assert!(weight.is_finite() && weight > 0.0, "edge weight {weight}");
        self.nodes.insert(src.clone());
        self.nodes.insert(dst.clone());
        *self.edges.entry((src, dst, kind)).or_insert(0.0) += weight;
    }

    /// Adds the same weight in both directions.
    pub fn add_symmetric(&mut self, a: &NodeRef, b: &NodeRef, kind: EdgeKind, weight: f64) {
        self.add_edge(a.clone(), b.clone(), kind, weight);
        self.add_edge(b.clone(), a.clone(), kind.reverse(), weight);
    }

    pub fn merge(&mut self, other: EdgeSet) {
        self.nodes.extend(other.nodes);
        for ((s, d, k), w) in other.edges {
            self.add_edge(s, d, k, w);
        }
    }

    pub fn weight(&self, src: &NodeRef, dst: &NodeRef, kind: EdgeKind) -> Option<f64> {
        self.edges.get(&(src.clone(), dst.clone(), kind)).copied()
    }

    pub fn contains_node(&self, node: &NodeRef) -> bool {
        self.nodes.contains(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeRef> {
        self.nodes.iter()
    }

    /// Edges in `(src, dst, kind)` order.
    pub fn edges(&self) -> impl Iterator<Item = (&NodeRef, &NodeRef, EdgeKind, f64)> {
        self.edges.iter().map(|((s, d, k), w)| (s, d, *k, *w))
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = (&NodeRef, &NodeRef, f64)> {
        self.edges()
            .filter(move |(_, _, k, _)| *k == kind)
            .map(|(s, d, _, w)| (s, d, w))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}
