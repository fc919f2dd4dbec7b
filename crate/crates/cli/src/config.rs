use std::str::FromStr;

use citeflow::{DisseminationConfig, EdgeKind, Layer};

use crate::args::EngineArgs;
use crate::CliError;

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("bad value {value:?} for {key}"))
}

/// Applies one `key = value` setting.
pub fn apply_setting(
    config: &mut DisseminationConfig,
    key: &str,
    value: &str,
) -> Result<(), String> {
    let key = key.replace('-', "_");
    match key.as_str() {
        "particles" | "particles_per_seed" => config.particles_per_seed = parse(&key, value)?,
        "initial_energy" => config.initial_energy = parse(&key, value)?,
        "decay" | "decay_scalar" => config.decay_scalar = parse(&key, value)?,
        "epsilon" => config.epsilon = parse(&key, value)?,
        "max_steps" => config.max_steps = parse(&key, value)?,
        "seed" | "rng_seed" => config.rng_seed = parse(&key, value)?,
        _ => {
            if let Some(kind) = key.strip_prefix("multiplier.") {
                let kind: EdgeKind = kind.parse().map_err(|e| format!("{key}: {e}"))?;
                config
                    .edge_kind_multipliers
                    .insert(kind, parse(&key, value)?);
            } else if let Some(layer) = key.strip_prefix("layer_particles.") {
                let layer: Layer = layer.parse().map_err(|e| format!("{key}: {e}"))?;
                config
                    .layer_particle_multipliers
                    .insert(layer, parse(&key, value)?);
            } else {
                return Err(format!("unknown config key {key:?}"));
            }
        }
    }
    Ok(())
}

/// Applies a config file of `key = value` lines; `#` starts a comment.
pub fn apply_config_file(config: &mut DisseminationConfig, text: &str) -> Result<(), String> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        apply_setting(config, key.trim(), value.trim())
            .map_err(|e| format!("line {}: {e}", i + 1))?;
    }
    Ok(())
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(args: &EngineArgs) -> Result<DisseminationConfig, CliError> {
    let mut config = DisseminationConfig::default();
    if let Some(path) = &args.config {
        let text = crate::read_text(path)?;
        apply_config_file(&mut config, &text)
            .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    }
    if let Some(v) = args.decay {
        config.decay_scalar = v;
    }
    if let Some(v) = args.particles {
        config.particles_per_seed = v;
    }
    if let Some(v) = args.epsilon {
        config.epsilon = v;
    }
    if let Some(v) = args.max_steps {
        config.max_steps = v;
    }
    if let Some(v) = args.seed {
        config.rng_seed = v;
    }
    config
        .validate()
        .map_err(|e| CliError::Domain(e.to_string()))?;
    Ok(config)
}
