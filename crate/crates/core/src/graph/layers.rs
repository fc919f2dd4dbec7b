//! Builder steps that turn a [`Corpus`] into edge sets.
//!
//! Lateral weights:
//! - co-authorship: every ordered pair of the `n` authors of a paper gains
//!   `1 / (n - 1)`, accumulated over papers;
//! - citation: each of the `n` references of a paper gets a `Cites` edge of
//!   weight `1 / n` and a reciprocal `CitedBy` edge of the same weight;
//! - journal similarity: the number of papers two journals share;
//! - author co-citation (alternative author layer): `+1` per record that
//!   cites a paper of each author.
//!
//! Vertical edges (wrote / written-by, published-in / contains) weigh 1.0.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    EdgeKind, EdgeSet, GraphBuilder, JournalKey, MultilayerGraph, NodeRef, VirtualJournals,
};
use crate::ingest::{AuthorKey, Corpus, IngestWarning, RecordId};

/// Which lateral network populates the author layer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AuthorLayer {
    #[default]
    Coauthorship,
    Cocitation,
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub author_layer: AuthorLayer,
    pub virtual_journals: VirtualJournals,
}

/// Journal -> member papers, for publishers and virtual journals alike.
pub type JournalMembership = BTreeMap<JournalKey, BTreeSet<RecordId>>;

fn author(k: &AuthorKey) -> NodeRef {
    NodeRef::Author(k.clone())
}

fn paper(k: &RecordId) -> NodeRef {
    NodeRef::Paper(k.clone())
}

/// Reference lists of the ingested records, completed with the claims other
/// records make through "Is Referenced By".
///
/// The citation weight `1 / n` uses the size of this set as `n`.
pub fn effective_references(corpus: &Corpus) -> BTreeMap<RecordId, BTreeSet<RecordId>> {
    let mut refs: BTreeMap<RecordId, BTreeSet<RecordId>> = corpus
        .records()
        .map(|r| (r.id.clone(), r.references.iter().cloned().collect()))
        .collect();
    for cited in corpus.records() {
        for citer in &cited.referenced_by {
            if let Some(list) = refs.get_mut(citer) {
                list.insert(cited.id.clone());
            }
        }
    }
    refs
}

/// Every paper id the corpus mentions: ingested records plus the stubs named
/// in reference lists.
pub fn known_papers(corpus: &Corpus) -> BTreeSet<RecordId> {
    let mut ids = BTreeSet::new();
    for r in corpus.records() {
        ids.insert(r.id.clone());
        ids.extend(r.references.iter().cloned());
        ids.extend(r.referenced_by.iter().cloned());
    }
    ids
}

pub fn build_coauthorship_layer(corpus: &Corpus) -> EdgeSet {
    let mut set = EdgeSet::new();
    for record in corpus.records() {
        for a in &record.authors {
            set.add_node(author(a));
        }
        let n = record.authors.len();
        if n < 2 {
            continue;
        }
        let increment = 1.0 / (n - 1) as f64;
        for (i, a) in record.authors.iter().enumerate() {
            for (j, b) in record.authors.iter().enumerate() {
                if i != j {
                    set.add_edge(author(a), author(b), EdgeKind::CoauthoredWith, increment);
                }
            }
        }
    }
    set
}

/// Author similarity from co-citation: for each record, every unordered pair
/// of distinct authors whose papers the record cites together gains 1.
///
/// Only ingested cited papers contribute, since a stub has no author list.
pub fn build_author_cocitation_layer(corpus: &Corpus) -> EdgeSet {
    let mut set = EdgeSet::new();
    for record in corpus.records() {
        for a in &record.authors {
            set.add_node(author(a));
        }
    }
    for record in corpus.records() {
        let cited: Vec<&[AuthorKey]> = record
            .references
            .iter()
            .filter_map(|id| corpus.get(id))
            .map(|r| r.authors.as_slice())
            .collect();
        let mut pairs: BTreeSet<(&AuthorKey, &AuthorKey)> = BTreeSet::new();
        for (i, first) in cited.iter().enumerate() {
            for second in &cited[i + 1..] {
                for a in first.iter() {
                    for b in second.iter() {
                        if a != b {
                            pairs.insert(if a < b { (a, b) } else { (b, a) });
                        }
                    }
                }
            }
        }
        for (a, b) in pairs {
            set.add_symmetric(&author(a), &author(b), EdgeKind::CocitedWith, 1.0);
        }
    }
    set
}

/// Citation network with stub nodes for papers that are referenced but not
/// ingested.
///
/// A citer known only from another record's "Is Referenced By" list gets a
/// provisional edge pair of weight 1.0 because its reference count is
/// unknown.
pub fn build_citation_layer(corpus: &Corpus) -> EdgeSet {
    let mut set = EdgeSet::new();
    for id in known_papers(corpus) {
        set.add_node(NodeRef::Paper(id));
    }
    for (citer, refs) in effective_references(corpus) {
        if refs.is_empty() {
            continue;
        }
        let weight = 1.0 / refs.len() as f64;
        for cited in &refs {
            set.add_edge(paper(&citer), paper(cited), EdgeKind::Cites, weight);
            set.add_edge(paper(cited), paper(&citer), EdgeKind::CitedBy, weight);
        }
    }
    for cited in corpus.records() {
        for citer in &cited.referenced_by {
            if !corpus.contains(citer) {
                set.add_edge(
                    paper(citer),
                    paper(&cited.id),
                    EdgeKind::ProvisionalCites,
                    1.0,
                );
                set.add_edge(
                    paper(&cited.id),
                    paper(citer),
                    EdgeKind::ProvisionalCitedBy,
                    1.0,
                );
            }
        }
    }
    set
}

/// Journal membership from publishers plus declared virtual journals.
/// Virtual-journal members the corpus never mentions are skipped with a
/// warning.
pub fn journal_membership(
    corpus: &Corpus,
    virtual_journals: &VirtualJournals,
) -> (JournalMembership, Vec<IngestWarning>) {
    let mut membership = JournalMembership::new();
    let mut warnings = Vec::new();
    for record in corpus.records() {
        if let Some(journal) = record.publisher.as_deref().and_then(JournalKey::new) {
            membership
                .entry(journal)
                .or_default()
                .insert(record.id.clone());
        }
    }
    let known = known_papers(corpus);
    for (journal, members) in virtual_journals.iter() {
        let entry = membership.entry(journal.clone()).or_default();
        for id in members {
            if known.contains(id) {
                entry.insert(id.clone());
            } else {
                warnings.push(IngestWarning {
                    location: id.to_string(),
                    message: format!("virtual journal {journal:?} names an unknown paper; skipped"),
                });
            }
        }
    }
    (membership, warnings)
}

/// Journal nodes and `SimilarJournal` edges weighted by shared-paper count.
pub fn journal_layer_from_membership(membership: &JournalMembership) -> EdgeSet {
    let mut set = EdgeSet::new();
    let mut containing: BTreeMap<&RecordId, Vec<&JournalKey>> = BTreeMap::new();
    for (journal, members) in membership {
        set.add_node(NodeRef::Journal(journal.clone()));
        for id in members {
            containing.entry(id).or_default().push(journal);
        }
    }
    let mut shared: BTreeMap<(&JournalKey, &JournalKey), u64> = BTreeMap::new();
    for journals in containing.values() {
        for (i, a) in journals.iter().enumerate() {
            for b in &journals[i + 1..] {
                *shared.entry((a, b)).or_default() += 1;
            }
        }
    }
    for ((a, b), n) in shared {
        set.add_symmetric(
            &NodeRef::Journal(a.clone()),
            &NodeRef::Journal(b.clone()),
            EdgeKind::SimilarJournal,
            n as f64,
        );
    }
    set
}

pub fn build_journal_layer(
    corpus: &Corpus,
    virtual_journals: &VirtualJournals,
) -> (EdgeSet, Vec<IngestWarning>) {
    let (membership, warnings) = journal_membership(corpus, virtual_journals);
    (journal_layer_from_membership(&membership), warnings)
}

pub fn build_vertical_projections(corpus: &Corpus, membership: &JournalMembership) -> EdgeSet {
    let mut set = EdgeSet::new();
    for record in corpus.records() {
        let p = paper(&record.id);
        set.add_node(p.clone());
        for a in &record.authors {
            set.add_symmetric(&author(a), &p, EdgeKind::WrotePaper, 1.0);
        }
    }
    for (journal, members) in membership {
        let j = NodeRef::Journal(journal.clone());
        for id in members {
            set.add_symmetric(&paper(id), &j, EdgeKind::PublishedIn, 1.0);
        }
    }
    set
}

/// Runs every builder step and freezes the result.
pub fn build_graph(
    corpus: &Corpus,
    options: &BuildOptions,
) -> (MultilayerGraph, Vec<IngestWarning>) {
    let (membership, warnings) = journal_membership(corpus, &options.virtual_journals);
    let mut builder = GraphBuilder::new();
    builder.merge(match options.author_layer {
        AuthorLayer::Coauthorship => build_coauthorship_layer(corpus),
        AuthorLayer::Cocitation => build_author_cocitation_layer(corpus),
    });
    builder.merge(build_citation_layer(corpus));
    builder.merge(journal_layer_from_membership(&membership));
    builder.merge(build_vertical_projections(corpus, &membership));
    for record in corpus.records() {
        if let Some(title) = &record.title {
            builder.set_display(paper(&record.id), title.clone());
        }
    }
    (builder.freeze(), warnings)
}

/// Adds virtual journals to an already built graph and recomputes the
/// journal layer and the paper/journal projections. Members that are not
/// paper nodes of `graph` are skipped with a warning.
pub fn with_virtual_journals(
    graph: &MultilayerGraph,
    virtual_journals: &VirtualJournals,
) -> (MultilayerGraph, Vec<IngestWarning>) {
    let mut membership = JournalMembership::new();
    let mut rest = EdgeSet::new();
    for node in graph.nodes() {
        rest.add_node(node.clone());
    }
    for (src, dst, kind, weight) in graph.edges() {
        match (kind, src, dst) {
            (EdgeKind::ContainsPaper, NodeRef::Journal(j), NodeRef::Paper(p)) => {
                membership.entry(j.clone()).or_default().insert(p.clone());
            }
            (EdgeKind::ContainsPaper | EdgeKind::PublishedIn | EdgeKind::SimilarJournal, _, _) => {}
            _ => rest.add_edge(src.clone(), dst.clone(), kind, weight),
        }
    }
    let mut warnings = Vec::new();
    for (journal, members) in virtual_journals.iter() {
        let entry = membership.entry(journal.clone()).or_default();
        for id in members {
            if graph.contains(&paper(id)) {
                entry.insert(id.clone());
            } else {
                warnings.push(IngestWarning {
                    location: id.to_string(),
                    message: format!("virtual journal {journal:?} names an unknown paper; skipped"),
                });
            }
        }
    }
    rest.merge(journal_layer_from_membership(&membership));
    for (journal, members) in &membership {
        let j = NodeRef::Journal(journal.clone());
        for id in members {
            rest.add_symmetric(&paper(id), &j, EdgeKind::PublishedIn, 1.0);
        }
    }
    let mut builder = GraphBuilder::new();
    builder.merge(rest);
    for node in graph.nodes() {
        if let Some(label) = graph.display_name(node) {
            builder.set_display(node.clone(), label.to_string());
        }
    }
    (builder.freeze(), warnings)
}
