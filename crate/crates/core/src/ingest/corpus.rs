use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::record::{parse_record, OaiRecord, RecordId};
use super::IngestError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestWarning {
    /// Record id when one could be recovered, otherwise `offset:<byte>`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WARN {} {}", self.location, self.message)
    }
}

/// A set of records keyed by id.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    records: BTreeMap<RecordId, OaiRecord>,
    warnings: Vec<IngestWarning>,
}

impl PartialEq for Corpus {
    /// Compares record content; warnings are diagnostics, not content.
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
    }
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: impl IntoIterator<Item = OaiRecord>) -> Self {
        let mut corpus = Corpus::new();
        for r in records {
            corpus.insert(r);
        }
        corpus
    }

    /// Adds a record; a record with the same id is replaced and a warning
    /// is logged.
    pub fn insert(&mut self, record: OaiRecord) {
        let id = record.id.clone();
        if self.records.insert(id.clone(), record).is_some() {
            self.warn(id.as_str(), "duplicate record id, replacing earlier record");
        }
    }

    pub fn warn(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(IngestWarning {
            location: location.into(),
            message: message.into(),
        });
    }

    /// Parses every `<record>` in `text` into the corpus and returns how many
    /// were accepted. Failures become warnings.
    pub fn ingest_str(&mut self, text: &str) -> usize {
        let chunks = split_records(text);
        let parsed: Vec<_> = chunks
            .par_iter()
            .map(|&(offset, chunk)| (offset, chunk, parse_record(chunk)))
            .collect();
        let mut accepted = 0;
        for (offset, chunk, result) in parsed {
            match result {
                Ok(record) => {
                    self.insert(record);
                    accepted += 1;
                }
                Err(err) => {
                    let location =
                        sniff_identifier(chunk).unwrap_or_else(|| format!("offset:{offset}"));
                    self.warn(location, err.to_string());
                }
            }
        }
        accepted
    }

    pub fn get(&self, id: &RecordId) -> Option<&OaiRecord> {
        self.records.get(id)
    }

    pub fn contains(&self, id: &RecordId) -> bool {
        self.records.contains_key(id)
    }

    /// Records in id order.
    pub fn records(&self) -> impl Iterator<Item = &OaiRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn warnings(&self) -> &[IngestWarning] {
        &self.warnings
    }
}

/// Parses a stream of `<record>` elements, optionally wrapped in an OAI-PMH
/// `<ListRecords>` envelope.
pub fn parse_corpus(text: &str) -> Result<Corpus, IngestError> {
    let mut corpus = Corpus::new();
    corpus.ingest_str(text);
    if corpus.is_empty() {
        return Err(IngestError::EmptyCorpus);
    }
    Ok(corpus)
}

fn is_record_open(text: &str, at: usize) -> bool {
    let rest = &text[at + "<record".len()..];
    matches!(
        rest.bytes().next(),
        Some(b'>' | b'/' | b' ' | b'\t' | b'\n' | b'\r')
    )
}

/// Slices `text` into `(byte offset, record text)` pieces. A record that is
/// never closed runs until the next `<record` opening, so one damaged record
/// cannot swallow its neighbours.
pub fn split_records(text: &str) -> Vec<(usize, &str)> {
    let mut opens = Vec::new();
    let mut from = 0;
    while let Some(pos) = text[from..].find("<record") {
        let at = from + pos;
        if is_record_open(text, at) {
            opens.push(at);
        }
        from = at + 1;
    }

    let mut out = Vec::with_capacity(opens.len());
    for (i, &start) in opens.iter().enumerate() {
        let limit = opens.get(i + 1).copied().unwrap_or(text.len());
        let end = text[start..limit]
            .find("</record>")
            .map(|p| start + p + "</record>".len())
            .or_else(|| {
                // Self-closing `<record/>`.
                let head_end = text[start..limit].find('>')? + start;
                (text.as_bytes()[head_end - 1] == b'/').then_some(head_end + 1)
            })
            .unwrap_or(limit);
        out.push((start, &text[start..end]));
    }
    out
}

fn sniff_identifier(chunk: &str) -> Option<String> {
    let start = chunk.find("<identifier>")? + "<identifier>".len();
    let len = chunk[start..].find('<')?;
    RecordId::new(&chunk[start..start + len])
        .ok()
        .map(|id| id.as_str().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str) -> String {
        format!(
            "<record><header><identifier>{id}</identifier></header>\
             <metadata><x:author name=\"Author {id}\"/></metadata></record>"
        )
    }

    #[test]
    fn three_valid_records() {
        let text = format!("{}{}{}", rec("a"), rec("b"), rec("c"));
        let corpus = parse_corpus(&text).unwrap();
        assert_eq!(corpus.len(), 3);
        assert!(corpus.warnings().is_empty());
    }

    #[test]
    fn malformed_record_becomes_warning() {
        let bad = "<record><header><identifier>bad</identifier></header><metadata></record>";
        let text = format!("{}\n{bad}\n{}", rec("a"), rec("c"));
        let corpus = parse_corpus(&text).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.warnings().len(), 1);
        assert_eq!(corpus.warnings()[0].location, "bad");
        assert!(corpus.warnings()[0].to_string().starts_with("WARN bad "));
    }

    #[test]
    fn unterminated_record_does_not_swallow_next() {
        let text = format!("<record><identifier>x</identifier>\n{}", rec("y"));
        let corpus = parse_corpus(&text).unwrap();
        assert_eq!(corpus.len(), 1);
        assert!(corpus.contains(&RecordId::new("y").unwrap()));
        assert_eq!(corpus.warnings().len(), 1);
    }

    #[test]
    fn missing_identifier_located_by_offset() {
        let text = format!("{}<record><metadata/></record>", rec("a"));
        let corpus = parse_corpus(&text).unwrap();
        let w = &corpus.warnings()[0];
        assert_eq!(w.location, format!("offset:{}", rec("a").len()));
    }

    #[test]
    fn order_does_not_matter() {
        let fwd = parse_corpus(&format!("{}{}{}", rec("a"), rec("b"), rec("c"))).unwrap();
        let rev = parse_corpus(&format!("{}{}{}", rec("c"), rec("b"), rec("a"))).unwrap();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn list_records_envelope() {
        let text = format!(
            "<?xml version=\"1.0\"?><OAI-PMH><ListRecords>{}{}</ListRecords>\
             <resumptionToken/></OAI-PMH>",
            rec("a"),
            rec("b")
        );
        assert_eq!(parse_corpus(&text).unwrap().len(), 2);
    }

    #[test]
    fn records_wrapper_is_not_a_record() {
        let text = format!("<records>{}</records>", rec("a"));
        let split = split_records(&text);
        assert_eq!(split.len(), 1);
    }

    #[test]
    fn empty_corpus() {
        assert_eq!(
            parse_corpus("<ListRecords/>"),
            Err(IngestError::EmptyCorpus)
        );
        assert_eq!(parse_corpus(""), Err(IngestError::EmptyCorpus));
        let only_bad = "<record><oops></record>";
        assert_eq!(parse_corpus(only_bad), Err(IngestError::EmptyCorpus));
    }

    #[test]
    fn duplicate_id_last_wins_with_warning() {
        let first = rec("a");
        let second = "<record><identifier>a</identifier></record>";
        let corpus = parse_corpus(&format!("{first}{second}")).unwrap();
        assert_eq!(corpus.len(), 1);
        assert!(corpus
            .get(&RecordId::new("a").unwrap())
            .unwrap()
            .authors
            .is_empty());
        assert_eq!(corpus.warnings().len(), 1);
    }

    proptest::proptest! {
        #[test]
        fn shuffled_streams_give_equal_corpora(
            ids in proptest::collection::btree_set("[a-z]{1,4}", 1..12),
            seed in 0u64..1000,
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut pieces: Vec<String> = ids.iter().map(|i| rec(i)).collect();
            let base = parse_corpus(&pieces.concat()).unwrap();
            pieces.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            proptest::prop_assert_eq!(parse_corpus(&pieces.concat()).unwrap(), base);
        }
    }
}
