//! The three-layer author / paper / journal graph.
//!
//! Lateral edges connect nodes inside a layer (co-authorship or author
//! co-citation, citation, journal similarity); vertical edges connect adjacent
//! layers (wrote / written-by, published-in / contains). Construction goes
//! through [`EdgeSet`]s produced by the builder functions in [`layers`], which
//! are merged into a [`GraphBuilder`] and then frozen into an immutable
//! [`MultilayerGraph`].

mod edges;
mod frozen;
pub mod layers;
mod persist;
mod virtual_journals;

pub use edges::EdgeSet;
pub use frozen::{Edge, EdgeView, GraphBuilder, MultilayerGraph, NodeId};
pub use layers::{
    build_graph, with_virtual_journals, AuthorLayer, BuildOptions, JournalMembership,
};
pub use persist::{read_graph, write_graph};
pub use virtual_journals::{parse_virtual_journals, VirtualJournals};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{normalize_author_name, normalize_whitespace, AuthorKey, RecordId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Author,
    Paper,
    Journal,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Author, Layer::Paper, Layer::Journal];

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Author => "author",
            Layer::Paper => "paper",
            Layer::Journal => "journal",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Layer {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "author" => Ok(Layer::Author),
            "paper" => Ok(Layer::Paper),
            "journal" => Ok(Layer::Journal),
            other => Err(GraphError::UnknownLayer(other.to_string())),
        }
    }
}

/// Journal or proceedings name, or the label of a declared virtual journal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JournalKey(String);

impl JournalKey {
    /// Collapses whitespace; `None` when nothing is left.
    pub fn new(raw: &str) -> Option<Self> {
        let name = normalize_whitespace(raw);
        (!name.is_empty()).then_some(JournalKey(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for JournalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A node, identified by its layer and the key type of that layer.
///
/// Ordering is by layer first (author < paper < journal) and then by key, which
/// is the tie-break order used everywhere results are ranked.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeRef {
    Author(AuthorKey),
    Paper(RecordId),
    Journal(JournalKey),
}

impl NodeRef {
    pub fn layer(&self) -> Layer {
        match self {
            NodeRef::Author(_) => Layer::Author,
            NodeRef::Paper(_) => Layer::Paper,
            NodeRef::Journal(_) => Layer::Journal,
        }
    }

    pub fn key(&self) -> &str {
        match self {
            NodeRef::Author(k) => k.as_str(),
            NodeRef::Paper(k) => k.as_str(),
            NodeRef::Journal(k) => k.as_str(),
        }
    }

    /// Builds a node from a layer and a raw key, applying that layer's
    /// normalization.
    pub fn from_parts(layer: Layer, raw_key: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::InvalidKey(layer, raw_key.to_string());
        Ok(match layer {
            Layer::Author => NodeRef::Author(normalize_author_name(raw_key).map_err(|_| bad())?),
            Layer::Paper => NodeRef::Paper(RecordId::new(raw_key).map_err(|_| bad())?),
            Layer::Journal => NodeRef::Journal(JournalKey::new(raw_key).ok_or_else(bad)?),
        })
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.layer(), self.key())
    }
}

impl FromStr for NodeRef {
    type Err = GraphError;

    /// Parses `layer:key`, e.g. `author:Amir Dembo` or `paper:oai:CiteSeerPSU:1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (layer, key) = s
            .split_once(':')
            .ok_or_else(|| GraphError::UnknownLayer(s.to_string()))?;
        NodeRef::from_parts(layer.trim().parse()?, key)
    }
}

impl From<AuthorKey> for NodeRef {
    fn from(k: AuthorKey) -> Self {
        NodeRef::Author(k)
    }
}

impl From<RecordId> for NodeRef {
    fn from(k: RecordId) -> Self {
        NodeRef::Paper(k)
    }
}

impl From<JournalKey> for NodeRef {
    fn from(k: JournalKey) -> Self {
        NodeRef::Journal(k)
    }
}

/// Semantic kind of a directed edge.
///
/// The two `Provisional*` kinds carry citations known only from a cited
/// record's "Is Referenced By" list, whose citing record has not been
/// ingested; they are replaced by `Cites`/`CitedBy` once it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    CoauthoredWith,
    CocitedWith,
    Cites,
    CitedBy,
    ProvisionalCites,
    ProvisionalCitedBy,
    SimilarJournal,
    WrotePaper,
    WrittenBy,
    PublishedIn,
    ContainsPaper,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 11] = [
        EdgeKind::CoauthoredWith,
        EdgeKind::CocitedWith,
        EdgeKind::Cites,
        EdgeKind::CitedBy,
        EdgeKind::ProvisionalCites,
        EdgeKind::ProvisionalCitedBy,
        EdgeKind::SimilarJournal,
        EdgeKind::WrotePaper,
        EdgeKind::WrittenBy,
        EdgeKind::PublishedIn,
        EdgeKind::ContainsPaper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::CoauthoredWith => "coauthored_with",
            EdgeKind::CocitedWith => "cocited_with",
            EdgeKind::Cites => "cites",
            EdgeKind::CitedBy => "cited_by",
            EdgeKind::ProvisionalCites => "provisional_cites",
            EdgeKind::ProvisionalCitedBy => "provisional_cited_by",
            EdgeKind::SimilarJournal => "similar_journal",
            EdgeKind::WrotePaper => "wrote_paper",
            EdgeKind::WrittenBy => "written_by",
            EdgeKind::PublishedIn => "published_in",
            EdgeKind::ContainsPaper => "contains_paper",
        }
    }

    /// (source layer, destination layer)
    pub fn endpoints(self) -> (Layer, Layer) {
        use EdgeKind::*;
        match self {
            CoauthoredWith | CocitedWith => (Layer::Author, Layer::Author),
            Cites | CitedBy | ProvisionalCites | ProvisionalCitedBy => (Layer::Paper, Layer::Paper),
            SimilarJournal => (Layer::Journal, Layer::Journal),
            WrotePaper => (Layer::Author, Layer::Paper),
            WrittenBy => (Layer::Paper, Layer::Author),
            PublishedIn => (Layer::Paper, Layer::Journal),
            ContainsPaper => (Layer::Journal, Layer::Paper),
        }
    }

    pub fn is_lateral(self) -> bool {
        let (s, d) = self.endpoints();
        s == d
    }

    /// The kind of the edge that runs the other way.
    pub fn reverse(self) -> EdgeKind {
        use EdgeKind::*;
        match self {
            CoauthoredWith => CoauthoredWith,
            CocitedWith => CocitedWith,
            SimilarJournal => SimilarJournal,
            Cites => CitedBy,
            CitedBy => Cites,
            ProvisionalCites => ProvisionalCitedBy,
            ProvisionalCitedBy => ProvisionalCites,
            WrotePaper => WrittenBy,
            WrittenBy => WrotePaper,
            PublishedIn => ContainsPaper,
            ContainsPaper => PublishedIn,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EdgeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| GraphError::UnknownEdgeKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown layer {0:?}")]
    UnknownLayer(String),
    #[error("unknown edge kind {0:?}")]
    UnknownEdgeKind(String),
    #[error("invalid {0} key {1:?}")]
    InvalidKey(Layer, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
