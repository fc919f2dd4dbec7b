//! Seeded random corpora for tests and benchmarks.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{normalize_author_name, Corpus, OaiRecord, RecordId};

/// Size and density of a generated corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusShape {
    pub papers: usize,
    pub authors: usize,
    pub journals: usize,
    pub max_authors_per_paper: usize,
    /// Each paper cites up to this many earlier papers.
    pub max_references: usize,
    /// Probability that a paper also cites one record outside the corpus.
    pub external_reference_rate: f64,
}

impl CorpusShape {
    /// Builds graphs of at most 50 nodes.
    pub fn tiny() -> Self {
        CorpusShape {
            papers: 12,
            authors: 14,
            journals: 3,
            max_authors_per_paper: 3,
            max_references: 3,
            external_reference_rate: 0.1,
        }
    }

    pub fn with_papers(papers: usize) -> Self {
        CorpusShape {
            papers,
            authors: (papers * 3 / 5).max(2),
            journals: (papers / 50).max(2),
            max_authors_per_paper: 4,
            max_references: 6,
            external_reference_rate: 0.1,
        }
    }
}

struct Pools<'a> {
    prefix: &'a str,
    authors: Vec<String>,
    journals: Vec<String>,
}

fn generate(
    rng: &mut ChaCha8Rng,
    shape: &CorpusShape,
    pools: &Pools,
    min_references: usize,
) -> Vec<OaiRecord> {
    let ids: Vec<RecordId> = (0..shape.papers)
        .map(|i| RecordId::new(&format!("{}p{i:05}", pools.prefix)).expect("non-empty id"))
        .collect();
    let mut records = Vec::with_capacity(shape.papers);
    for (i, rid) in ids.iter().enumerate() {
        let mut r = OaiRecord::new(rid.clone());
        r.title = Some(format!("Synthetic paper {rid}"));
        r.publisher = pools.journals.choose(rng).cloned();

        let n_authors = rng.random_range(1..=shape.max_authors_per_paper.min(pools.authors.len()));
        for name in pools.authors.choose_multiple(rng, n_authors) {
            r.authors
                .push(normalize_author_name(name).expect("generated name"));
        }

        if i > 0 {
            let lo = min_references.min(i);
            let hi = shape.max_references.min(i).max(lo);
            let n_refs = rng.random_range(lo..=hi);
            for j in rand::seq::index::sample(rng, i, n_refs) {
                r.references.push(ids[j].clone());
            }
        }
        if rng.random_bool(shape.external_reference_rate) {
            let ext = format!(
                "{}ext{:04}",
                pools.prefix,
                rng.random_range(0..shape.papers.max(1))
            );
            r.references
                .push(RecordId::new(&ext).expect("non-empty id"));
        }
        records.push(r);
    }
    records
}

/// A corpus whose papers cite earlier papers at random.
pub fn random_corpus(shape: &CorpusShape, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pools = Pools {
        prefix: "",
        authors: (0..shape.authors).map(|i| format!("Author {i}")).collect(),
        journals: (0..shape.journals)
            .map(|i| format!("Journal {i}"))
            .collect(),
    };
    Corpus::from_records(generate(&mut rng, shape, &pools, 0))
}

/// Prefix of the record ids in cluster `k` of [`clustered_corpus`].
pub fn cluster_prefix(k: usize) -> String {
    format!("c{k}-")
}

/// `clusters` communities of `papers_per_cluster` papers each, sharing no
/// citations, authors or journals. Every paper after the first in a cluster
/// cites at least one earlier paper of its own cluster, so each cluster is
/// connected.
pub fn clustered_corpus(clusters: usize, papers_per_cluster: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = CorpusShape {
        external_reference_rate: 0.0,
        ..CorpusShape::with_papers(papers_per_cluster)
    };
    let mut records = Vec::new();
    for k in 0..clusters {
        let prefix = cluster_prefix(k);
        let pools = Pools {
            prefix: &prefix,
            authors: (0..shape.authors)
                .map(|i| format!("Author {k} {i}"))
                .collect(),
            journals: (0..shape.journals)
                .map(|i| format!("Journal {k} {i}"))
                .collect(),
        };
        records.extend(generate(&mut rng, &shape, &pools, 1));
    }
    Corpus::from_records(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, BuildOptions};

    #[test]
    fn same_seed_same_corpus() {
        let shape = CorpusShape::with_papers(100);
        assert_eq!(random_corpus(&shape, 3), random_corpus(&shape, 3));
        assert_ne!(random_corpus(&shape, 3), random_corpus(&shape, 4));
        assert_eq!(random_corpus(&shape, 3).len(), 100);
    }

    #[test]
    fn tiny_graphs_stay_small() {
        for seed in 0..50 {
            let (g, _) = build_graph(
                &random_corpus(&CorpusShape::tiny(), seed),
                &BuildOptions::default(),
            );
            assert!(
                g.node_count() <= 50,
                "seed {seed}: {} nodes",
                g.node_count()
            );
        }
    }

    #[test]
    fn clusters_do_not_cite_each_other() {
        let corpus = clustered_corpus(2, 40, 1);
        assert_eq!(corpus.len(), 80);
        for r in corpus.records() {
            let own = &r.id.as_str()[..3];
            assert!(r.references.iter().all(|x| x.as_str().starts_with(own)));
            if !r.id.as_str().ends_with("p00000") {
                assert!(!r.references.is_empty());
            }
        }
    }
}
