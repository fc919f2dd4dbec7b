use std::collections::BTreeMap;
use std::io::Write;

use super::{RankedResult, WorkflowKind};
use crate::graph::GraphError;
use crate::ingest::{normalize_author_name, AuthorKey};
use crate::textfmt::format_sig12;

/// Personal notification thresholds: an author is only notified when the
/// energy reaching them is strictly above their own threshold.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReaderThresholds(BTreeMap<AuthorKey, f64>);

impl ReaderThresholds {
    pub fn set(&mut self, author: AuthorKey, min_energy: f64) {
        self.0.insert(author, min_energy);
    }

    pub fn get(&self, author: &AuthorKey) -> Option<f64> {
        self.0.get(author).copied()
    }

    pub fn allows(&self, author: &AuthorKey, energy: f64) -> bool {
        self.get(author).is_none_or(|min| energy > min)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Parses `T <author-key> <min-energy>` lines. The author name may span
/// several tokens and is normalized; the last token is the energy.
pub fn parse_reader_thresholds(text: &str) -> Result<ReaderThresholds, GraphError> {
    let mut out = ReaderThresholds::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| GraphError::Parse {
            line: i + 1,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] != "T" || tokens.len() < 3 {
            return Err(err(format!(
                "expected `T <author-key> <min-energy>`, got {line:?}"
            )));
        }
        let author = normalize_author_name(&tokens[1..tokens.len() - 1].join(" "))
            .map_err(|e| err(e.to_string()))?;
        let last = tokens[tokens.len() - 1];
        let min: f64 = last
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| err(format!("bad energy {last:?}")))?;
        out.set(author, min);
    }
    Ok(out)
}

/// Writes `rank,layer,key,energy` rows, plus an `influence` column for
/// reviewer results.
pub fn write_result_csv<W: Write>(result: &RankedResult, out: W) -> csv::Result<()> {
    let with_influence = result.workflow == WorkflowKind::Reviewers;
    let mut w = csv::Writer::from_writer(out);
    if with_influence {
        w.write_record(["rank", "layer", "key", "energy", "influence"])?;
    } else {
        w.write_record(["rank", "layer", "key", "energy"])?;
    }
    for e in &result.entries {
        let rank = e.rank.to_string();
        let energy = format_sig12(e.energy);
        let mut row = vec![
            rank.as_str(),
            e.node.layer().as_str(),
            e.node.key(),
            energy.as_str(),
        ];
        let influence = e.influence.map(format_sig12);
        if with_influence {
            row.push(influence.as_deref().unwrap_or(""));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
