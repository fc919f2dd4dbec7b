use std::collections::BTreeSet;

use super::DisseminationError;
use crate::graph::{MultilayerGraph, NodeRef};

/// Excitatory (`positive`) and inhibitory (`negative`) seed sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProblemModel {
    positive: BTreeSet<NodeRef>,
    negative: BTreeSet<NodeRef>,
}

impl ProblemModel {
    /// The sets must be disjoint and not both empty.
    pub fn new(
        positive: impl IntoIterator<Item = NodeRef>,
        negative: impl IntoIterator<Item = NodeRef>,
    ) -> Result<Self, DisseminationError> {
        let positive: BTreeSet<NodeRef> = positive.into_iter().collect();
        let negative: BTreeSet<NodeRef> = negative.into_iter().collect();
        if let Some(both) = positive.intersection(&negative).next() {
            return Err(DisseminationError::InvalidProblem(format!(
                "{both} is both an excitatory and an inhibitory seed"
            )));
        }
        if positive.is_empty() && negative.is_empty() {
            return Err(DisseminationError::InvalidProblem("no seeds".into()));
        }
        Ok(ProblemModel { positive, negative })
    }

    pub fn positive(
        positive: impl IntoIterator<Item = NodeRef>,
    ) -> Result<Self, DisseminationError> {
        Self::new(positive, [])
    }

    pub fn positive_seeds(&self) -> &BTreeSet<NodeRef> {
        &self.positive
    }

    pub fn negative_seeds(&self) -> &BTreeSet<NodeRef> {
        &self.negative
    }

    /// Swaps the two seed sets.
    pub fn negated(&self) -> Self {
        ProblemModel {
            positive: self.negative.clone(),
            negative: self.positive.clone(),
        }
    }

    /// Every seed with its sign (+1.0 / -1.0), in node order regardless of
    /// polarity. Particle random streams are assigned in this order, so
    /// flipping polarities leaves every walk unchanged.
    pub fn signed_seeds(&self) -> Vec<(&NodeRef, f64)> {
        let mut seeds: Vec<(&NodeRef, f64)> = self
            .positive
            .iter()
            .map(|n| (n, 1.0))
            .chain(self.negative.iter().map(|n| (n, -1.0)))
            .collect();
        seeds.sort_by(|a, b| a.0.cmp(b.0));
        seeds
    }

    pub fn check_against(&self, graph: &MultilayerGraph) -> Result<(), DisseminationError> {
        for node in self.positive.iter().chain(&self.negative) {
            if !graph.contains(node) {
                return Err(DisseminationError::SeedNotInGraph(node.to_string()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NodeRef {
        s.parse().unwrap()
    }

    #[test]
    fn overlapping_sets_rejected() {
        assert!(ProblemModel::new([n("paper:a")], [n("paper:a")]).is_err());
        assert!(ProblemModel::new([], []).is_err());
    }

    #[test]
    fn signed_seed_order_ignores_polarity() {
        let p = ProblemModel::new([n("paper:b")], [n("author:z"), n("paper:a")]).unwrap();
        let order: Vec<String> = p
            .signed_seeds()
            .iter()
            .map(|(s, _)| s.to_string())
            .collect();
        let flipped: Vec<String> = p
            .negated()
            .signed_seeds()
            .iter()
            .map(|(s, _)| s.to_string())
            .collect();
        assert_eq!(order, ["author:z", "paper:a", "paper:b"]);
        assert_eq!(order, flipped);
    }
}
