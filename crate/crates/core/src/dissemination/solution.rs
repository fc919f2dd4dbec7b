use std::collections::BTreeSet;

use super::{DisseminationError, EnergyLedger};
use crate::graph::{Layer, NodeRef};

/// Per-layer ranked nodes whose energy exceeded the threshold.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolutionModel {
    pub s_author: Vec<(NodeRef, f64)>,
    pub s_paper: Vec<(NodeRef, f64)>,
    pub s_journal: Vec<(NodeRef, f64)>,
}

impl SolutionModel {
    pub fn layer(&self, layer: Layer) -> &[(NodeRef, f64)] {
        match layer {
            Layer::Author => &self.s_author,
            Layer::Paper => &self.s_paper,
            Layer::Journal => &self.s_journal,
        }
    }

    pub fn into_layer(self, layer: Layer) -> Vec<(NodeRef, f64)> {
        match layer {
            Layer::Author => self.s_author,
            Layer::Paper => self.s_paper,
            Layer::Journal => self.s_journal,
        }
    }
}

/// Descending energy, then ascending key.
fn rank(entries: &mut [(NodeRef, f64)]) {
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

/// Keeps nodes with energy strictly above `threshold` that are not in
/// `exclude`, split by layer and ranked.
pub fn extract_solution(
    ledger: &EnergyLedger,
    threshold: f64,
    exclude: &BTreeSet<NodeRef>,
) -> SolutionModel {
    let mut solution = SolutionModel::default();
    for (node, energy) in ledger.iter() {
        if energy > threshold && !exclude.contains(node) {
            let entry = (node.clone(), energy);
            match node.layer() {
                Layer::Author => solution.s_author.push(entry),
                Layer::Paper => solution.s_paper.push(entry),
                Layer::Journal => solution.s_journal.push(entry),
            }
        }
    }
    rank(&mut solution.s_author);
    rank(&mut solution.s_paper);
    rank(&mut solution.s_journal);
    solution
}

/// Threshold that keeps the `k` highest-energy nodes of `layer`.
///
/// Returns the energy of the `(k+1)`-th node, or 0.0 when the layer has
/// exactly `k` positive nodes. When the `k`-th and `(k+1)`-th nodes tie, no
/// threshold can separate them; the value returned is then the largest float
/// below the tied energy, and the caller keeps the first `k` entries of the
/// ranked list (ties resolved by key order).
pub fn top_k_threshold(
    ledger: &EnergyLedger,
    layer: Layer,
    k: usize,
) -> Result<f64, DisseminationError> {
    let mut energies: Vec<(NodeRef, f64)> = ledger
        .in_layer(layer)
        .filter(|(_, e)| *e > 0.0)
        .map(|(n, e)| (n.clone(), e))
        .collect();
    if k == 0 || energies.len() < k {
        return Err(DisseminationError::NotEnoughPositiveNodes {
            layer,
            wanted: k,
            found: energies.len(),
        });
    }
    rank(&mut energies);
    if energies.len() == k {
        return Ok(0.0);
    }
    let kth = energies[k - 1].1;
    let next = energies[k].1;
    Ok(if kth > next { next } else { kth.next_down() })
}
