//! Bibliographic recommendation by spreading activation over a three-layer
//! author / paper / journal graph built from OAI metadata records.

pub mod dissemination;
pub mod graph;
pub mod ingest;
pub mod synthetic;
pub mod textfmt;
pub mod workflows;

pub use dissemination::{
    disseminate, expected_energy_oracle, extract_solution, top_k_threshold, DisseminationConfig,
    DisseminationError, EnergyLedger, ProblemModel, SolutionModel,
};
pub use graph::{
    build_graph, BuildOptions, EdgeKind, GraphError, JournalKey, Layer, MultilayerGraph, NodeRef,
};
pub use ingest::{
    normalize_author_name, parse_corpus, parse_record, AuthorKey, Corpus, IngestError, OaiRecord,
    RecordId,
};
pub use workflows::{
    find_collaborators, find_journal, find_readers, find_references, find_reviewers, run_workflow,
    Engine, RankedEntry, RankedResult, ReviewerSeeding, WorkflowError, WorkflowKind,
    WorkflowOptions, WorkflowRequest,
};
