use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DisseminationError;
use crate::graph::{EdgeKind, Layer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisseminationConfig {
    /// Particles injected at each seed node.
    pub particles_per_seed: u32,
    /// Energy magnitude each particle starts with.
    pub initial_energy: f64,
    /// Fraction of its energy a particle keeps per step, in `[0, 1]`.
    pub decay_scalar: f64,
    /// Particles whose energy magnitude falls below this retire.
    pub epsilon: f64,
    /// Hard cap on moves per particle.
    pub max_steps: u32,
    pub rng_seed: u64,
    /// Per-kind weight multipliers applied before normalization; missing
    /// kinds use 1.0.
    #[serde(default)]
    pub edge_kind_multipliers: BTreeMap<EdgeKind, f64>,
    /// Per-layer factor on `particles_per_seed`; missing layers use 1.
    #[serde(default)]
    pub layer_particle_multipliers: BTreeMap<Layer, u32>,
}

impl Default for DisseminationConfig {
    fn default() -> Self {
        DisseminationConfig {
            particles_per_seed: 1_000,
            initial_energy: 1.0,
            decay_scalar: 0.85,
            epsilon: 1e-6,
            max_steps: 10_000,
            rng_seed: 0,
            edge_kind_multipliers: BTreeMap::new(),
            layer_particle_multipliers: BTreeMap::new(),
        }
    }
}

impl DisseminationConfig {
    pub fn multiplier(&self, kind: EdgeKind) -> f64 {
        self.edge_kind_multipliers
            .get(&kind)
            .copied()
            .unwrap_or(1.0)
    }

    pub fn particles_for(&self, layer: Layer) -> u64 {
        let factor = self
            .layer_particle_multipliers
            .get(&layer)
            .copied()
            .unwrap_or(1);
        u64::from(self.particles_per_seed) * u64::from(factor)
    }

    pub fn has_default_multipliers(&self) -> bool {
        self.edge_kind_multipliers.values().all(|&m| m == 1.0)
    }

    pub fn validate(&self) -> Result<(), DisseminationError> {
        let bad = |m: String| Err(DisseminationError::InvalidConfig(m));
        if self.particles_per_seed == 0 {
            return bad("particles_per_seed must be positive".into());
        }
        if !(self.initial_energy.is_finite() && self.initial_energy > 0.0) {
            return bad(format!(
                "initial_energy must be positive, got {}",
                self.initial_energy
            ));
        }
        if !(0.0..=1.0).contains(&self.decay_scalar) {
            return bad(format!(
                "decay_scalar must lie in [0, 1], got {}",
                self.decay_scalar
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        for (kind, m) in &self.edge_kind_multipliers {
            if !(m.is_finite() && *m >= 0.0) {
                return bad(format!(
                    "multiplier for {kind} must be finite and non-negative"
                ));
            }
        }
        Ok(())
    }
}
