use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{DisseminationConfig, DisseminationError, EnergyLedger, ProblemModel};
use crate::graph::{MultilayerGraph, NodeId};

/// Particles are simulated in fixed-size blocks. Each block sums its own
/// deposits in particle order and blocks are merged in index order, so the
/// result does not depend on how many threads run the blocks.
pub const PARTICLE_BLOCK: usize = 256;

/// Energy magnitude of a particle after each move: entry `t` is what the
/// particle deposits on arrival after its `t`-th move, entry 0 is the deposit
/// on its seed. Ends at the first magnitude below epsilon (inclusive) or at
/// `max_steps` moves; trailing zero deposits are dropped.
pub fn energy_schedule(config: &DisseminationConfig) -> Vec<f64> {
    let mut schedule = vec![config.initial_energy];
    let mut magnitude = config.initial_energy;
    while schedule.len() <= config.max_steps as usize && magnitude >= config.epsilon {
        magnitude *= config.decay_scalar;
        schedule.push(magnitude);
    }
    while schedule.len() > 1 && schedule.last() == Some(&0.0) {
        schedule.pop();
    }
    schedule
}

/// Cumulative outgoing weights per node after applying kind multipliers.
struct TransitionTable {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    cumulative: Vec<f64>,
}

impl TransitionTable {
    fn new(graph: &MultilayerGraph, config: &DisseminationConfig) -> Self {
        let mut offsets = Vec::with_capacity(graph.node_count() + 1);
        let mut targets = Vec::with_capacity(graph.edge_count());
        let mut cumulative = Vec::with_capacity(graph.edge_count());
        for id in graph.node_ids() {
            offsets.push(targets.len());
            let mut running = 0.0;
            for e in graph.out_edges(id) {
                let w = e.weight * config.multiplier(e.kind);
                if w > 0.0 {
                    running += w;
                    targets.push(e.dst);
                    cumulative.push(running);
                }
            }
        }
        offsets.push(targets.len());
        TransitionTable {
            offsets,
            targets,
            cumulative,
        }
    }

    /// Picks the next node for a uniform draw `u` in `[0, 1)`; `None` at a
    /// dead end.
    fn step(&self, from: NodeId, u: f64) -> Option<NodeId> {
        let row = self.offsets[from.index()]..self.offsets[from.index() + 1];
        let cum = &self.cumulative[row.clone()];
        let total = *cum.last()?;
        let x = u * total;
        let pick = cum.partition_point(|&c| c <= x).min(cum.len() - 1);
        Some(self.targets[row.start + pick])
    }
}

struct Particle {
    seed: NodeId,
    sign: f64,
}

fn prepare(
    graph: &MultilayerGraph,
    problem: &ProblemModel,
    config: &DisseminationConfig,
) -> Result<Vec<Particle>, DisseminationError> {
    config.validate()?;
    problem.check_against(graph)?;
    let mut particles = Vec::new();
    for (node, sign) in problem.signed_seeds() {
        let seed = graph.id_of(node).expect("checked above");
        for _ in 0..config.particles_for(node.layer()) {
            particles.push(Particle { seed, sign });
        }
    }
    Ok(particles)
}

fn run_block(
    block: usize,
    particles: &[Particle],
    table: &TransitionTable,
    schedule: &[f64],
    base_rng: &ChaCha8Rng,
    node_count: usize,
) -> Vec<(usize, f64)> {
    let mut dense = vec![0.0f64; node_count];
    let mut touched = vec![false; node_count];
    let mut order = Vec::new();
    let mut deposit = |node: NodeId, e: f64| {
        let i = node.index();
        if !touched[i] {
            touched[i] = true;
            order.push(i);
        }
        dense[i] += e;
    };
    for (offset, particle) in particles.iter().enumerate() {
        let index = (block * PARTICLE_BLOCK + offset) as u64;
        let mut rng = base_rng.clone();
        rng.set_stream(index);
        let mut at = particle.seed;
        deposit(at, particle.sign * schedule[0]);
        for &magnitude in &schedule[1..] {
            match table.step(at, rng.random::<f64>()) {
                Some(next) => at = next,
                None => break,
            }
            deposit(at, particle.sign * magnitude);
        }
    }
    order.sort_unstable();
    order.into_iter().map(|i| (i, dense[i])).collect()
}

fn collect(graph: &MultilayerGraph, partials: Vec<Vec<(usize, f64)>>) -> EnergyLedger {
    let mut dense = vec![0.0f64; graph.node_count()];
    let mut touched = vec![false; graph.node_count()];
    for partial in partials {
        for (i, e) in partial {
            dense[i] += e;
            touched[i] = true;
        }
    }
    graph
        .nodes()
        .iter()
        .enumerate()
        .filter(|(i, _)| touched[*i])
        .map(|(i, n)| (n.clone(), dense[i]))
        .collect()
}

fn run(
    graph: &MultilayerGraph,
    problem: &ProblemModel,
    config: &DisseminationConfig,
    parallel: bool,
) -> Result<EnergyLedger, DisseminationError> {
    let particles = prepare(graph, problem, config)?;
    let table = TransitionTable::new(graph, config);
    let schedule = energy_schedule(config);
    let base_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let n = graph.node_count();
    let partials: Vec<Vec<(usize, f64)>> = if parallel {
        particles
            .par_chunks(PARTICLE_BLOCK)
            .enumerate()
            .map(|(b, chunk)| run_block(b, chunk, &table, &schedule, &base_rng, n))
            .collect()
    } else {
        particles
            .chunks(PARTICLE_BLOCK)
            .enumerate()
            .map(|(b, chunk)| run_block(b, chunk, &table, &schedule, &base_rng, n))
            .collect()
    };
    Ok(collect(graph, partials))
}

/// Runs the particle simulation on the rayon thread pool. The result is a
/// pure function of the inputs and identical to [`disseminate_serial`].
pub fn disseminate(
    graph: &MultilayerGraph,
    problem: &ProblemModel,
    config: &DisseminationConfig,
) -> Result<EnergyLedger, DisseminationError> {
    run(graph, problem, config, true)
}

pub fn disseminate_serial(
    graph: &MultilayerGraph,
    problem: &ProblemModel,
    config: &DisseminationConfig,
) -> Result<EnergyLedger, DisseminationError> {
    run(graph, problem, config, false)
}
