use std::path::{Path, PathBuf};

use citeflow::workflows::{Engine, ReviewerSeeding, WorkflowKind};
use citeflow::DisseminationConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything needed to repeat a query run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub workflow: WorkflowKind,
    pub engine: Engine,
    pub rng_seed: u64,
    pub config: DisseminationConfig,
    pub request: QueryRequest,
    pub inputs: Vec<InputDigest>,
    pub output_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

/// Query inputs after flag resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRequest {
    pub papers: Vec<String>,
    pub authors: Vec<String>,
    pub journal: Option<String>,
    pub threshold: Option<f64>,
    pub limit: Option<usize>,
    pub exclude_seeds: bool,
    pub reviewer_seeding: ReviewerSeeding,
    pub oracle_max_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn input(&self, role: &str) -> Option<&InputDigest> {
        self.inputs.iter().find(|i| i.role == role)
    }
}

/// `<out>.manifest.json`, or `citeflow-query.manifest.json` when the CSV goes
/// to standard output.
pub fn default_manifest_path(out: Option<&Path>) -> PathBuf {
    match out {
        Some(out) => {
            let mut name = out.as_os_str().to_owned();
            name.push(".manifest.json");
            PathBuf::from(name)
        }
        None => PathBuf::from("citeflow-query.manifest.json"),
    }
}
