//! Shared inputs for the benchmarks under `benches/`.

use citeflow::synthetic::{random_corpus, CorpusShape};
use citeflow::{
    build_graph, BuildOptions, Corpus, MultilayerGraph, NodeRef, OaiRecord, ProblemModel,
};

pub const SEED: u64 = 17;

pub fn corpus(papers: usize) -> Corpus {
    random_corpus(&CorpusShape::with_papers(papers), SEED)
}

pub fn corpus_xml(papers: usize) -> String {
    corpus(papers).records().map(OaiRecord::to_xml).collect()
}

pub fn graph(papers: usize) -> MultilayerGraph {
    build_graph(&corpus(papers), &BuildOptions::default()).0
}

/// One paper seed in the middle of the corpus.
pub fn keystone_problem(graph: &MultilayerGraph) -> ProblemModel {
    let papers: Vec<&NodeRef> = graph.nodes_in_layer(citeflow::Layer::Paper).collect();
    ProblemModel::positive([papers[papers.len() / 2].clone()]).expect("non-empty seed set")
}
