//! Particle-based spreading activation.
//!
//! Every seed node of a [`ProblemModel`] injects a batch of particles carrying
//! `+initial_energy` (excitatory seeds) or `-initial_energy` (inhibitory
//! seeds). A particle first deposits its energy on its seed, then repeatedly
//! picks an outgoing edge with probability proportional to its weight, has
//! its energy multiplied by the decay scalar, moves, and deposits its current
//! energy on the node it reached. It retires once its energy magnitude drops
//! below `epsilon`, after `max_steps` moves, or on a node without outgoing
//! edges. The [`EnergyLedger`] is the sum of all deposits.
//!
//! [`expected_energy_oracle`] computes the exact expectation of the same
//! process by propagating the seed vector through the transition matrix.

mod config;
mod engine;
mod ledger;
mod oracle;
mod problem;
mod solution;

pub use config::DisseminationConfig;
pub use engine::{disseminate, disseminate_serial, energy_schedule, PARTICLE_BLOCK};
pub use ledger::{read_ledger, write_ledger, EnergyLedger};
pub use oracle::{expected_energy_oracle, expected_energy_oracle_with_limit, ORACLE_MAX_NODES};
pub use problem::ProblemModel;
pub use solution::{extract_solution, top_k_threshold, SolutionModel};

use thiserror::Error;

use crate::graph::Layer;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DisseminationError {
    #[error("seed {0} is not in the graph")]
    SeedNotInGraph(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid problem model: {0}")]
    InvalidProblem(String),
    #[error("graph has {nodes} nodes, the oracle is limited to {limit}")]
    GraphTooLarge { nodes: usize, limit: usize },
    #[error("{layer} layer has {found} positive-energy nodes, {wanted} requested")]
    NotEnoughPositiveNodes {
        layer: Layer,
        wanted: usize,
        found: usize,
    },
}
