//! The five recommendation queries. Each one builds a problem model from its
//! inputs, runs dissemination, and reads one layer of the solution model:
//!
//! | query          | excitatory seeds                 | inhibitory seeds | result layer |
//! |----------------|----------------------------------|------------------|--------------|
//! | references     | keystone paper                   |                  | paper        |
//! | collaborators  | related papers                   |                  | author       |
//! | journal        | referenced papers, co-authors    |                  | journal      |
//! | reviewers      | reviewing journal, ref. papers   | co-authors       | author       |
//! | readers        | referenced papers, paper authors |                  | author       |

mod export;

pub use export::{parse_reader_thresholds, write_result_csv, ReaderThresholds};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dissemination::{
    disseminate, expected_energy_oracle_with_limit, extract_solution, top_k_threshold,
    DisseminationConfig, DisseminationError, EnergyLedger, ProblemModel, ORACLE_MAX_NODES,
};
use crate::graph::{EdgeKind, JournalKey, Layer, MultilayerGraph, NodeRef};
use crate::ingest::{AuthorKey, RecordId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkflowKind {
    References,
    Collaborators,
    Journal,
    Reviewers,
    Readers,
}

impl WorkflowKind {
    pub const ALL: [WorkflowKind; 5] = [
        WorkflowKind::References,
        WorkflowKind::Collaborators,
        WorkflowKind::Journal,
        WorkflowKind::Reviewers,
        WorkflowKind::Readers,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WorkflowKind::References => "references",
            WorkflowKind::Collaborators => "collaborators",
            WorkflowKind::Journal => "journal",
            WorkflowKind::Reviewers => "reviewers",
            WorkflowKind::Readers => "readers",
        }
    }

    pub fn solution_layer(self) -> Layer {
        match self {
            WorkflowKind::References => Layer::Paper,
            WorkflowKind::Journal => Layer::Journal,
            WorkflowKind::Collaborators | WorkflowKind::Reviewers | WorkflowKind::Readers => {
                Layer::Author
            }
        }
    }

    /// `None` means unlimited.
    pub fn default_limit(self) -> Option<usize> {
        match self {
            WorkflowKind::References => Some(20),
            WorkflowKind::Collaborators => Some(10),
            WorkflowKind::Journal => Some(1),
            WorkflowKind::Reviewers | WorkflowKind::Readers => None,
        }
    }
}

impl fmt::Display for WorkflowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WorkflowKind {
    type Err = WorkflowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WorkflowKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| WorkflowError::InvalidRequest(format!("unknown workflow {s:?}")))
    }
}

/// Which engine produces the ledger.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Particles,
    /// Exact expectation; limited to graphs of `oracle_max_nodes` nodes.
    Oracle,
}

/// How the reviewers query represents the submitted paper.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewerSeeding {
    /// Seed the referenced papers themselves.
    #[default]
    ReferencedPapers,
    /// Seed the authors of the referenced papers instead, keeping the search
    /// inside the author layer.
    CitedAuthors,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WorkflowRequest {
    pub kind: Option<WorkflowKind>,
    pub keystone_paper: Option<RecordId>,
    pub related_papers: Vec<RecordId>,
    pub coauthors: Vec<AuthorKey>,
    pub reviewing_journal: Option<JournalKey>,
    /// `None` uses the workflow default.
    pub result_limit: Option<usize>,
    /// `None` uses 0.0.
    pub threshold: Option<f64>,
}

impl WorkflowRequest {
    pub fn new(kind: WorkflowKind) -> Self {
        WorkflowRequest {
            kind: Some(kind),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct WorkflowOptions {
    pub config: DisseminationConfig,
    pub engine: Engine,
    /// Drop the query's own seeds from the result: the keystone paper for
    /// references and the paper's authors for readers. Co-authors are always
    /// dropped from reviewer results.
    pub exclude_seeds: bool,
    pub reviewer_seeding: ReviewerSeeding,
    /// Per-author minimum energy for reader notifications.
    pub reader_thresholds: ReaderThresholds,
    pub oracle_max_nodes: usize,
}

impl Default for WorkflowOptions {
    fn default() -> Self {
        WorkflowOptions {
            config: DisseminationConfig::default(),
            engine: Engine::Particles,
            exclude_seeds: true,
            reviewer_seeding: ReviewerSeeding::ReferencedPapers,
            reader_thresholds: ReaderThresholds::default(),
            oracle_max_nodes: ORACLE_MAX_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub rank: usize,
    pub node: NodeRef,
    pub energy: f64,
    /// Share of the result's total energy; reviewers only.
    pub influence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    pub workflow: WorkflowKind,
    pub entries: Vec<RankedEntry>,
    /// Energy threshold finally applied, including any top-k trimming.
    pub threshold: f64,
    pub config_echo: DisseminationConfig,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorkflowError {
    #[error("unknown paper {0}")]
    UnknownPaper(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("no seed nodes given")]
    EmptySeedSet,
    #[error("{0} is required for this workflow")]
    MissingField(&'static str),
    #[error("{0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Dissemination(#[from] DisseminationError),
}

/// Problem model plus the nodes to drop from the result.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkflowPlan {
    pub kind: WorkflowKind,
    pub problem: ProblemModel,
    pub exclude: BTreeSet<NodeRef>,
}

fn require(graph: &MultilayerGraph, node: NodeRef) -> Result<NodeRef, WorkflowError> {
    if graph.contains(&node) {
        Ok(node)
    } else if node.layer() == Layer::Paper {
        Err(WorkflowError::UnknownPaper(node.key().to_string()))
    } else {
        Err(WorkflowError::UnknownNode(node.to_string()))
    }
}

fn papers(graph: &MultilayerGraph, ids: &[RecordId]) -> Result<Vec<NodeRef>, WorkflowError> {
    ids.iter()
        .map(|id| require(graph, NodeRef::Paper(id.clone())))
        .collect()
}

fn authors(graph: &MultilayerGraph, keys: &[AuthorKey]) -> Result<Vec<NodeRef>, WorkflowError> {
    keys.iter()
        .map(|k| require(graph, NodeRef::Author(k.clone())))
        .collect()
}

fn authors_of(graph: &MultilayerGraph, paper: &NodeRef) -> Vec<NodeRef> {
    let id = graph.id_of(paper).expect("checked paper");
    graph
        .out_edges(id)
        .filter(|e| e.kind == EdgeKind::WrittenBy)
        .map(|e| graph.node(e.dst).clone())
        .collect()
}

/// Builds the problem model and exclusion set for a request.
pub fn plan_workflow(
    graph: &MultilayerGraph,
    request: &WorkflowRequest,
    options: &WorkflowOptions,
) -> Result<WorkflowPlan, WorkflowError> {
    let kind = request
        .kind
        .ok_or(WorkflowError::MissingField("workflow kind"))?;
    let mut exclude = BTreeSet::new();
    let problem = match kind {
        WorkflowKind::References => {
            let keystone = request
                .keystone_paper
                .clone()
                .ok_or(WorkflowError::MissingField("keystone paper"))?;
            let keystone = require(graph, NodeRef::Paper(keystone))?;
            if options.exclude_seeds {
                exclude.insert(keystone.clone());
            }
            ProblemModel::positive([keystone])?
        }
        WorkflowKind::Collaborators => {
            if request.related_papers.is_empty() {
                return Err(WorkflowError::EmptySeedSet);
            }
            ProblemModel::positive(papers(graph, &request.related_papers)?)?
        }
        WorkflowKind::Journal => {
            let mut seeds = papers(graph, &request.related_papers)?;
            seeds.extend(authors(graph, &request.coauthors)?);
            if seeds.is_empty() {
                return Err(WorkflowError::EmptySeedSet);
            }
            ProblemModel::positive(seeds)?
        }
        WorkflowKind::Reviewers => {
            let journal = request
                .reviewing_journal
                .clone()
                .ok_or(WorkflowError::MissingField("reviewing journal"))?;
            if request.coauthors.is_empty() {
                return Err(WorkflowError::MissingField(
                    "co-authors of the submitted paper",
                ));
            }
            let inhibitory: BTreeSet<NodeRef> =
                authors(graph, &request.coauthors)?.into_iter().collect();
            let mut excitatory = vec![require(graph, NodeRef::Journal(journal))?];
            let referenced = papers(graph, &request.related_papers)?;
            match options.reviewer_seeding {
                ReviewerSeeding::ReferencedPapers => excitatory.extend(referenced),
                ReviewerSeeding::CitedAuthors => {
                    for p in &referenced {
                        excitatory.extend(
                            authors_of(graph, p)
                                .into_iter()
                                .filter(|a| !inhibitory.contains(a)),
                        );
                    }
                }
            }
            exclude.extend(inhibitory.iter().cloned());
            ProblemModel::new(excitatory, inhibitory)?
        }
        WorkflowKind::Readers => {
            let paper_authors = authors(graph, &request.coauthors)?;
            let mut seeds = papers(graph, &request.related_papers)?;
            seeds.extend(paper_authors.iter().cloned());
            if seeds.is_empty() {
                return Err(WorkflowError::EmptySeedSet);
            }
            if options.exclude_seeds {
                exclude.extend(paper_authors);
            }
            ProblemModel::positive(seeds)?
        }
    };
    Ok(WorkflowPlan {
        kind,
        problem,
        exclude,
    })
}

fn run_engine(
    graph: &MultilayerGraph,
    problem: &ProblemModel,
    options: &WorkflowOptions,
) -> Result<EnergyLedger, DisseminationError> {
    match options.engine {
        Engine::Particles => disseminate(graph, problem, &options.config),
        Engine::Oracle => expected_energy_oracle_with_limit(
            graph,
            problem,
            &options.config,
            options.oracle_max_nodes,
        ),
    }
}

/// Ranks one layer of `ledger` for a planned workflow.
pub fn rank_solution(
    ledger: &EnergyLedger,
    plan: &WorkflowPlan,
    request: &WorkflowRequest,
    options: &WorkflowOptions,
) -> Result<RankedResult, WorkflowError> {
    let layer = plan.kind.solution_layer();
    let mut threshold = request.threshold.unwrap_or(0.0);
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(WorkflowError::InvalidRequest(format!(
            "threshold must be finite and non-negative, got {threshold}"
        )));
    }
    let limit = match request.result_limit {
        Some(0) => {
            return Err(WorkflowError::InvalidRequest(
                "result limit must be positive".into(),
            ))
        }
        Some(k) => Some(k),
        None => plan.kind.default_limit(),
    };

    let mut entries = extract_solution(ledger, threshold, &plan.exclude).into_layer(layer);
    if plan.kind == WorkflowKind::Readers && !options.reader_thresholds.is_empty() {
        entries.retain(|(node, energy)| match node {
            NodeRef::Author(a) => options.reader_thresholds.allows(a, *energy),
            _ => true,
        });
    }
    if let Some(k) = limit {
        if entries.len() > k {
            let candidates: EnergyLedger = entries.iter().cloned().collect();
            threshold = threshold.max(top_k_threshold(&candidates, layer, k)?);
            entries.truncate(k);
        }
    }

    let total: f64 = entries.iter().map(|(_, e)| e).sum();
    let with_influence = plan.kind == WorkflowKind::Reviewers;
    let entries = entries
        .into_iter()
        .enumerate()
        .map(|(i, (node, energy))| RankedEntry {
            rank: i + 1,
            node,
            energy,
            influence: with_influence.then(|| energy / total),
        })
        .collect();
    Ok(RankedResult {
        workflow: plan.kind,
        entries,
        threshold,
        config_echo: options.config.clone(),
    })
}

/// Plans, disseminates and ranks. Never mutates the graph.
pub fn run_workflow(
    graph: &MultilayerGraph,
    request: &WorkflowRequest,
    options: &WorkflowOptions,
) -> Result<RankedResult, WorkflowError> {
    let plan = plan_workflow(graph, request, options)?;
    let ledger = run_engine(graph, &plan.problem, options)?;
    rank_solution(&ledger, &plan, request, options)
}

/// Papers related to a keystone paper.
pub fn find_references(
    graph: &MultilayerGraph,
    keystone: &RecordId,
    options: &WorkflowOptions,
) -> Result<RankedResult, WorkflowError> {
    let request = WorkflowRequest {
        keystone_paper: Some(keystone.clone()),
        ..WorkflowRequest::new(WorkflowKind::References)
    };
    run_workflow(graph, &request, options)
}

/// Authors related to a set of papers, typically the output of
/// [`find_references`].
pub fn find_collaborators(
    graph: &MultilayerGraph,
    related_papers: &[RecordId],
    options: &WorkflowOptions,
) -> Result<RankedResult, WorkflowError> {
    let request = WorkflowRequest {
        related_papers: related_papers.to_vec(),
        ..WorkflowRequest::new(WorkflowKind::Collaborators)
    };
    run_workflow(graph, &request, options)
}

/// Journal to submit to, from the new paper's references and its authors.
pub fn find_journal(
    graph: &MultilayerGraph,
    referenced_papers: &[RecordId],
    coauthors: &[AuthorKey],
    options: &WorkflowOptions,
) -> Result<RankedResult, WorkflowError> {
    let request = WorkflowRequest {
        related_papers: referenced_papers.to_vec(),
        coauthors: coauthors.to_vec(),
        ..WorkflowRequest::new(WorkflowKind::Journal)
    };
    run_workflow(graph, &request, options)
}

/// Referees for a submitted paper, with each one's share of the energy.
/// The paper's authors inhibit themselves and their neighbourhood.
pub fn find_reviewers(
    graph: &MultilayerGraph,
    reviewing_journal: &JournalKey,
    referenced_papers: &[RecordId],
    coauthors: &[AuthorKey],
    options: &WorkflowOptions,
) -> Result<RankedResult, WorkflowError> {
    let request = WorkflowRequest {
        reviewing_journal: Some(reviewing_journal.clone()),
        related_papers: referenced_papers.to_vec(),
        coauthors: coauthors.to_vec(),
        ..WorkflowRequest::new(WorkflowKind::Reviewers)
    };
    run_workflow(graph, &request, options)
}

/// Authors to notify about a newly published paper.
pub fn find_readers(
    graph: &MultilayerGraph,
    paper_authors: &[AuthorKey],
    referenced_papers: &[RecordId],
    options: &WorkflowOptions,
) -> Result<RankedResult, WorkflowError> {
    let request = WorkflowRequest {
        related_papers: referenced_papers.to_vec(),
        coauthors: paper_authors.to_vec(),
        ..WorkflowRequest::new(WorkflowKind::Readers)
    };
    run_workflow(graph, &request, options)
}
