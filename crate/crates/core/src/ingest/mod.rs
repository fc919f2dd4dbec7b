//! Ingestion of OAI-style `<record>` metadata.
//!
//! Only the elements that feed the graph are read: the header identifier and
//! timestamp, `dc:title`, the CiteSeer `author name=` attributes, the
//! `References` / `Is Referenced By` relations and `dc:publisher`. Everything
//! else in a record is skipped.

mod corpus;
mod names;
mod record;

pub use corpus::{parse_corpus, split_records, Corpus, IngestWarning};
pub use names::{normalize_author_name, normalize_whitespace};
pub use record::{parse_record, AuthorKey, OaiRecord, RecordId};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("record has no <identifier>")]
    MissingIdentifier,
    #[error("corpus contains no parseable records")]
    EmptyCorpus,
    #[error("author name is empty")]
    EmptyName,
    #[error("record id is empty")]
    EmptyRecordId,
}
