use std::collections::{BTreeMap, HashMap};

use super::{EdgeKind, EdgeSet, GraphError, Layer, NodeRef};

/// Dense index of a node inside one [`MultilayerGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub src: NodeRef,
    pub dst: NodeRef,
    pub kind: EdgeKind,
    pub weight: f64,
}

/// An outgoing edge as stored in the frozen adjacency arrays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeView {
    pub dst: NodeId,
    pub kind: EdgeKind,
    pub weight: f64,
}

/// Single-writer accumulation phase before [`GraphBuilder::freeze`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    set: EdgeSet,
    display: BTreeMap<NodeRef, String>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn merge(&mut self, set: EdgeSet) -> &mut Self {
        self.set.merge(set);
        self
    }

    pub fn edge_set(&self) -> &EdgeSet {
        &self.set
    }

    /// Attaches a human-readable label (paper title, raw author name).
    pub fn set_display(&mut self, node: NodeRef, label: impl Into<String>) {
        self.display.insert(node, label.into());
    }

    pub fn freeze(self) -> MultilayerGraph {
        let nodes: Vec<NodeRef> = self.set.nodes().cloned().collect();
        let index: HashMap<NodeRef, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), NodeId(i as u32)))
            .collect();

        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        let mut targets = Vec::with_capacity(self.set.edge_count());
        let mut kinds = Vec::with_capacity(self.set.edge_count());
        let mut weights = Vec::with_capacity(self.set.edge_count());
        let mut out_weight = vec![0.0; nodes.len()];

        // EdgeSet iterates in (src, dst, kind) order and `nodes` is sorted the
        // same way, so the CSR rows come out contiguous.
        let mut edges = self.set.edges().peekable();
        for (i, node) in nodes.iter().enumerate() {
            offsets.push(targets.len());
            while let Some((_, dst, kind, w)) = edges.next_if(|(s, _, _, _)| *s == node) {
                targets.push(index[dst]);
                kinds.push(kind);
                weights.push(w);
                out_weight[i] += w;
            }
        }
        offsets.push(targets.len());
        debug_assert!(edges.next().is_none());

        let display = self
            .display
            .into_iter()
            .filter(|(n, _)| index.contains_key(n))
            .collect();

        MultilayerGraph {
            nodes,
            index,
            offsets,
            targets,
            kinds,
            weights,
            out_weight,
            display,
        }
    }
}

/// Immutable three-layer graph in compressed adjacency form.
///
/// Nodes are stored in [`NodeRef`] order and each node's outgoing edges in
/// `(dst, kind)` order, so every traversal is deterministic.
#[derive(Debug, Clone)]
pub struct MultilayerGraph {
    nodes: Vec<NodeRef>,
    index: HashMap<NodeRef, NodeId>,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    kinds: Vec<EdgeKind>,
    weights: Vec<f64>,
    out_weight: Vec<f64>,
    display: BTreeMap<NodeRef, String>,
}

impl MultilayerGraph {
    pub fn empty() -> Self {
        GraphBuilder::new().freeze()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn node(&self, id: NodeId) -> &NodeRef {
        &self.nodes[id.index()]
    }

    pub fn id_of(&self, node: &NodeRef) -> Option<NodeId> {
        self.index.get(node).copied()
    }

    pub fn contains(&self, node: &NodeRef) -> bool {
        self.index.contains_key(node)
    }

    pub fn nodes_in_layer(&self, layer: Layer) -> impl Iterator<Item = &NodeRef> {
        self.nodes.iter().filter(move |n| n.layer() == layer)
    }

    pub fn out_edges(&self, id: NodeId) -> impl ExactSizeIterator<Item = EdgeView> + '_ {
        let range = self.offsets[id.index()]..self.offsets[id.index() + 1];
        range.map(move |e| EdgeView {
            dst: self.targets[e],
            kind: self.kinds[e],
            weight: self.weights[e],
        })
    }

    pub fn out_degree(&self, id: NodeId) -> usize {
        self.offsets[id.index() + 1] - self.offsets[id.index()]
    }

    pub fn out_weight(&self, id: NodeId) -> f64 {
        self.out_weight[id.index()]
    }

    pub fn is_dead_end(&self, id: NodeId) -> bool {
        self.out_degree(id) == 0
    }

    /// All edges in `(src, dst, kind)` order.
    pub fn edges(&self) -> impl Iterator<Item = (&NodeRef, &NodeRef, EdgeKind, f64)> + '_ {
        (0..self.nodes.len()).flat_map(move |i| {
            let src = &self.nodes[i];
            self.out_edges(NodeId(i as u32))
                .map(move |e| (src, &self.nodes[e.dst.index()], e.kind, e.weight))
        })
    }

    pub fn edge_weight(&self, src: &NodeRef, dst: &NodeRef, kind: EdgeKind) -> Option<f64> {
        let s = self.id_of(src)?;
        let d = self.id_of(dst)?;
        self.out_edges(s)
            .find(|e| e.dst == d && e.kind == kind)
            .map(|e| e.weight)
    }

    pub fn display_name(&self, node: &NodeRef) -> Option<&str> {
        self.display.get(node).map(String::as_str)
    }

    /// Transition probabilities out of `node`: outgoing weights of every kind
    /// combined per destination and normalized to sum to one. Empty for a
    /// dead end.
    pub fn out_distribution(&self, node: &NodeRef) -> Result<Vec<(NodeRef, f64)>, GraphError> {
        let id = self
            .id_of(node)
            .ok_or_else(|| GraphError::UnknownNode(node.to_string()))?;
        let total = self.out_weight(id);
        let mut out: Vec<(NodeRef, f64)> = Vec::with_capacity(self.out_degree(id));
        let mut last: Option<NodeId> = None;
        let mut acc = 0.0;
        for e in self.out_edges(id) {
            if last != Some(e.dst) {
                if let Some(prev) = last {
                    out.push((self.node(prev).clone(), acc / total));
                }
                last = Some(e.dst);
                acc = 0.0;
            }
            acc += e.weight;
        }
        if let Some(prev) = last {
            out.push((self.node(prev).clone(), acc / total));
        }
        Ok(out)
    }

    /// Rebuilds an equivalent [`EdgeSet`].
    pub fn to_edge_set(&self) -> EdgeSet {
        let mut set = EdgeSet::new();
        for n in &self.nodes {
            set.add_node(n.clone());
        }
        for (s, d, k, w) in self.edges() {
            set.add_edge(s.clone(), d.clone(), k, w);
        }
        set
    }
}
