use std::collections::{BTreeMap, BTreeSet};

use super::{GraphError, JournalKey};
use crate::ingest::RecordId;

/// Explicitly declared journals: a label and the set of papers it groups.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VirtualJournals {
    members: BTreeMap<JournalKey, BTreeSet<RecordId>>,
}

impl VirtualJournals {
    pub fn declare(&mut self, journal: JournalKey, paper: RecordId) {
        self.members.entry(journal).or_default().insert(paper);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&JournalKey, &BTreeSet<RecordId>)> {
        self.members.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// Parses lines of `J <journal-label> <record-id>`. The label may contain
/// spaces; the record id is the last token. Blank lines and `#` comments are
/// skipped.
pub fn parse_virtual_journals(text: &str) -> Result<VirtualJournals, GraphError> {
    let mut out = VirtualJournals::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| GraphError::Parse {
            line: i + 1,
            message: message.to_string(),
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] != "J" {
            return Err(err("expected a `J <journal-label> <record-id>` line"));
        }
        if tokens.len() < 3 {
            return Err(err("virtual journal line needs a label and a record id"));
        }
        let label = JournalKey::new(&tokens[1..tokens.len() - 1].join(" "))
            .ok_or_else(|| err("empty journal label"))?;
        let id = RecordId::new(tokens[tokens.len() - 1]).map_err(|_| err("empty record id"))?;
        out.declare(label, id);
    }
    Ok(out)
}
