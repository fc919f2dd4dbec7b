use std::path::PathBuf;

use citeflow::WorkflowKind;
use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{ArgAction, Args, Parser, Subcommand};

fn workflow_kind_parser() -> impl TypedValueParser<Value = WorkflowKind> {
    PossibleValuesParser::new(WorkflowKind::ALL.map(|k| k.as_str()))
        .map(|s| s.parse::<WorkflowKind>().expect("listed kind"))
}

#[derive(Debug, Parser)]
#[command(
    name = "citeflow",
    version,
    about = "Bibliographic recommendation over author/paper/journal graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse OAI record files and write a graph file.
    Ingest(IngestArgs),
    /// Rewrite a graph file canonically, optionally adding virtual journals.
    Build(BuildArgs),
    /// Summarize a graph file.
    Stats(StatsArgs),
    /// Run a recommendation query and print ranked CSV.
    Query(Box<QueryArgs>),
    /// Disseminate from arbitrary seeds and write the full energy ledger.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Record files, or directories whose `*.xml` files are read.
    pub paths: Vec<PathBuf>,
    /// Graph file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Lines of `J <journal label> <record-id>`.
    #[arg(long)]
    pub virtual_journals: Option<PathBuf>,
    /// Lateral edges of the author layer.
    #[arg(long, default_value = "coauthorship", value_parser = ["coauthorship", "cocitation"])]
    pub author_layer: String,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub virtual_journals: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub graph: PathBuf,
}

/// Dissemination settings. Precedence: defaults < `--config` file < flags.
#[derive(Debug, Clone, Default, Args)]
pub struct EngineArgs {
    /// `key = value` lines; see the README for the keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Energy multiplier applied on every move, in [0, 1].
    #[arg(long)]
    pub decay: Option<f64>,
    /// Particles injected per seed node.
    #[arg(long)]
    pub particles: Option<u32>,
    /// Particles retire once their energy magnitude drops below this.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Upper bound on moves per particle.
    #[arg(long)]
    pub max_steps: Option<u32>,
    /// Random seed for the particle engine.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use the exact expectation instead of sampling particles.
    #[arg(long)]
    pub oracle: bool,
    /// Largest graph the exact engine accepts.
    #[arg(long, default_value_t = citeflow::dissemination::ORACLE_MAX_NODES)]
    pub oracle_max_nodes: usize,
    /// Worker threads for the particle engine; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(required_unless_present = "replay", value_parser = workflow_kind_parser())]
    pub kind: Option<WorkflowKind>,
    /// Graph file written by `ingest` or `build`.
    #[arg(long, required_unless_present = "replay")]
    pub graph: Option<PathBuf>,
    /// Paper seed; the keystone for `references`. Repeatable.
    #[arg(long)]
    pub paper: Vec<String>,
    /// Read paper seeds from the paper rows of an earlier query's CSV.
    #[arg(long)]
    pub papers_from: Option<PathBuf>,
    /// Author seed: co-authors for `journal` and `reviewers`, the paper's
    /// authors for `readers`. Repeatable.
    #[arg(long)]
    pub author: Vec<String>,
    /// Reviewing journal for `reviewers`.
    #[arg(long)]
    pub journal: Option<String>,
    /// Reader thresholds, lines of `T <author-key> <min-energy>`.
    #[arg(long)]
    pub thresholds: Option<PathBuf>,
    /// Reader contacts, lines of `C <author-key> <address>`.
    #[arg(long, requires = "recipients")]
    pub contacts: Option<PathBuf>,
    /// Where to write the `author,contact,energy` recipient list.
    #[arg(long)]
    pub recipients: Option<PathBuf>,
    /// Keep only results with energy above this value.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Maximum number of results; defaults depend on the query.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Drop the keystone paper or the paper's authors from the results.
    #[arg(long, action = ArgAction::Set)]
    pub exclude_seeds: Option<bool>,
    /// Reviewers: seed the authors of the referenced papers instead of the
    /// papers.
    #[arg(long)]
    pub cited_authors: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest destination; defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Re-run the query recorded in a manifest and check its output digest.
    #[arg(long, conflicts_with_all = ["kind", "graph"])]
    pub replay: Option<PathBuf>,
    /// Store the wall-clock duration in the manifest. Off by default so that
    /// repeated runs give identical manifests.
    #[arg(long)]
    pub record_timing: bool,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Excitatory seed as `layer:key`. Repeatable.
    #[arg(long)]
    pub pos: Vec<String>,
    /// Inhibitory seed as `layer:key`. Repeatable.
    #[arg(long)]
    pub neg: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub engine: EngineArgs,
}
