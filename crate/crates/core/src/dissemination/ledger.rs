use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::graph::{GraphError, Layer, NodeRef};
use crate::textfmt::{escape_key, format_sig12, unescape_key};

/// Accumulated energy per node after a run. Nodes no particle touched are
/// absent and read as 0.0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnergyLedger {
    energy: BTreeMap<NodeRef, f64>,
}

impl EnergyLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, node: &NodeRef) -> f64 {
        self.energy.get(node).copied().unwrap_or(0.0)
    }

    pub fn add(&mut self, node: NodeRef, energy: f64) {
        *self.energy.entry(node).or_insert(0.0) += energy;
    }

    /// Entries in node order.
    pub fn iter(&self) -> impl Iterator<Item = (&NodeRef, f64)> {
        self.energy.iter().map(|(n, e)| (n, *e))
    }

    pub fn in_layer(&self, layer: Layer) -> impl Iterator<Item = (&NodeRef, f64)> {
        self.iter().filter(move |(n, _)| n.layer() == layer)
    }

    pub fn len(&self) -> usize {
        self.energy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energy.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.energy.values().sum()
    }

    /// Entries sorted by descending energy, ties in node order.
    pub fn ranked(&self) -> Vec<(&NodeRef, f64)> {
        let mut out: Vec<_> = self.iter().collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        out
    }
}

impl FromIterator<(NodeRef, f64)> for EnergyLedger {
    fn from_iter<I: IntoIterator<Item = (NodeRef, f64)>>(iter: I) -> Self {
        let mut ledger = EnergyLedger::new();
        for (n, e) in iter {
            ledger.add(n, e);
        }
        ledger
    }
}

/// Writes `<layer> <key> <energy>` lines, highest energy first, with 12
/// significant digits.
pub fn write_ledger<W: Write>(ledger: &EnergyLedger, out: &mut W) -> io::Result<()> {
    for (node, energy) in ledger.ranked() {
        writeln!(
            out,
            "{} {} {}",
            node.layer(),
            escape_key(node.key()),
            format_sig12(energy)
        )?;
    }
    Ok(())
}

pub fn read_ledger(text: &str) -> Result<EnergyLedger, GraphError> {
    let mut ledger = EnergyLedger::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| GraphError::Parse {
            line: i + 1,
            message,
        };
        let [layer, key, energy] = line.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(err(format!(
                "expected `<layer> <key> <energy>`, got {line:?}"
            )));
        };
        let layer: Layer = layer.parse().map_err(|e: GraphError| err(e.to_string()))?;
        let key = unescape_key(key).ok_or_else(|| err(format!("bad escape in {key:?}")))?;
        let node = NodeRef::from_parts(layer, &key).map_err(|e| err(e.to_string()))?;
        let energy: f64 = energy
            .parse()
            .ok()
            .filter(|e: &f64| e.is_finite())
            .ok_or_else(|| err(format!("bad energy {energy:?}")))?;
        ledger.add(node, energy);
    }
    Ok(ledger)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NodeRef {
        s.parse().unwrap()
    }

    #[test]
    fn export_sorted_descending() {
        let ledger: EnergyLedger = [
            (n("paper:b"), 2.0 / 3.0),
            (n("paper:a"), 4.0 / 3.0),
            (n("author:amir dembo"), 2.0 / 3.0),
            (n("journal:J"), -0.25),
        ]
        .into_iter()
        .collect();
        let mut buf = Vec::new();
        write_ledger(&ledger, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "paper a 1.33333333333\n\
             author amir%20dembo 0.666666666667\n\
             paper b 0.666666666667\n\
             journal J -0.25\n"
        );
        let back = read_ledger(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.len(), 4);
        assert!((back.get(&n("paper:a")) - 4.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn absent_reads_zero() {
        assert_eq!(EnergyLedger::new().get(&n("paper:x")), 0.0);
    }
}
