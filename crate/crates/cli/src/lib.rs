//! Command-line front end for the `citeflow` library.
//!
//! Exit statuses: 0 on success, 1 for domain errors (bad input data, unknown
//! nodes, empty corpora), 2 for environment errors (unreadable or unwritable
//! files, graphs too large for the exact engine).

pub mod args;
mod commands;
pub mod config;
pub mod manifest;

use std::io::Write;
use std::path::Path;

use citeflow::{DisseminationError, WorkflowError};
use thiserror::Error;

pub use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Environment(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Environment(_) => 2,
        }
    }
}

impl From<DisseminationError> for CliError {
    fn from(e: DisseminationError) -> Self {
        match e {
            DisseminationError::GraphTooLarge { .. } => CliError::Environment(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<WorkflowError> for CliError {
    fn from(e: WorkflowError) -> Self {
        match e {
            WorkflowError::Dissemination(inner) => inner.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Environment(format!("{}: {e}", path.display())))
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read_bytes(path)?)
        .map_err(|_| CliError::Domain(format!("{}: not valid UTF-8", path.display())))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Environment(format!("{}: {e}", path.display())))
}

pub(crate) fn io_err(e: std::io::Error) -> CliError {
    CliError::Environment(e.to_string())
}

/// Runs one parsed command, writing results to `out` and warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest(a) => commands::ingest(&a, out, err),
        Command::Build(a) => commands::build(&a, out, err),
        Command::Stats(a) => commands::stats(&a, out),
        Command::Query(a) => commands::query(&a, out),
        Command::Export(a) => commands::export(&a, out),
    }
}
