use super::{DisseminationConfig, DisseminationError, EnergyLedger, ProblemModel};
use crate::graph::MultilayerGraph;

/// Default node limit for [`expected_energy_oracle`].
pub const ORACLE_MAX_NODES: usize = 10_000;

/// Exact expected ledger of [`super::disseminate`].
///
/// With `T` the row-normalized transition matrix (dead-end rows all zero),
/// `s` the seed vector (signed particle counts) and `m_t` the particle energy
/// after `t` moves, the expectation is `m_0 s + sum_t m_t (s T^t)`, summed up
/// to the first `t` whose energy falls below epsilon (or `max_steps`).
pub fn expected_energy_oracle(
    graph: &MultilayerGraph,
    problem: &ProblemModel,
    config: &DisseminationConfig,
) -> Result<EnergyLedger, DisseminationError> {
    expected_energy_oracle_with_limit(graph, problem, config, ORACLE_MAX_NODES)
}

pub fn expected_energy_oracle_with_limit(
    graph: &MultilayerGraph,
    problem: &ProblemModel,
    config: &DisseminationConfig,
    max_nodes: usize,
) -> Result<EnergyLedger, DisseminationError> {
    config.validate()?;
    problem.check_against(graph)?;
    let n = graph.node_count();
    if n > max_nodes {
        return Err(DisseminationError::GraphTooLarge {
            nodes: n,
            limit: max_nodes,
        });
    }

    // Sparse rows of T: (column, probability).
    let rows: Vec<Vec<(usize, f64)>> = graph
        .node_ids()
        .map(|id| {
            let weighted: Vec<(usize, f64)> = graph
                .out_edges(id)
                .map(|e| (e.dst.index(), e.weight * config.multiplier(e.kind)))
                .filter(|&(_, w)| w > 0.0)
                .collect();
            let total: f64 = weighted.iter().map(|(_, w)| w).sum();
            weighted.into_iter().map(|(j, w)| (j, w / total)).collect()
        })
        .collect();

    let mut mass = vec![0.0f64; n];
    for (node, sign) in problem.signed_seeds() {
        let i = graph.id_of(node).expect("checked above").index();
        mass[i] += sign * config.particles_for(node.layer()) as f64;
    }

    let e0 = config.initial_energy;
    let mut total: Vec<f64> = mass.iter().map(|m| m * e0).collect();
    let mut reached: Vec<bool> = mass.iter().map(|&m| m != 0.0).collect();

    for t in 1..=config.max_steps {
        let energy = e0 * config.decay_scalar.powi(t as i32);
        if energy == 0.0 {
            break;
        }
        let mut next = vec![0.0f64; n];
        for (i, row) in rows.iter().enumerate() {
            if mass[i] != 0.0 {
                for &(j, p) in row {
                    next[j] += mass[i] * p;
                }
            }
        }
        mass = next;
        if mass.iter().all(|&m| m == 0.0) {
            break;
        }
        for i in 0..n {
            if mass[i] != 0.0 {
                total[i] += energy * mass[i];
                reached[i] = true;
            }
        }
        if energy < config.epsilon {
            break;
        }
    }

    Ok(graph
        .nodes()
        .iter()
        .enumerate()
        .filter(|(i, _)| reached[*i])
        .map(|(i, node)| (node.clone(), total[i]))
        .collect())
}
