use std::fmt;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use serde::{Deserialize, Serialize};

use super::names::{normalize_author_name, normalize_whitespace};
use super::IngestError;

/// Repository identifier of a record, e.g. `oai:CiteSeerPSU:99914`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecordId(String);

impl RecordId {
    pub fn new(raw: &str) -> Result<Self, IngestError> {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return Err(IngestError::EmptyRecordId);
        }
        Ok(RecordId(trimmed.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RecordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Normalized author name. Build one with [`normalize_author_name`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorKey(String);

impl AuthorKey {
    pub(crate) fn from_canonical(canonical: String) -> Self {
        AuthorKey(canonical)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AuthorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaiRecord {
    pub id: RecordId,
    pub title: Option<String>,
    pub authors: Vec<AuthorKey>,
    /// Papers this record cites.
    pub references: Vec<RecordId>,
    /// Papers that cite this record.
    pub referenced_by: Vec<RecordId>,
    pub publisher: Option<String>,
    pub timestamp: Option<String>,
}

impl OaiRecord {
    /// A record with only an identifier.
    pub fn new(id: RecordId) -> Self {
        OaiRecord {
            id,
            title: None,
            authors: Vec::new(),
            references: Vec::new(),
            referenced_by: Vec::new(),
            publisher: None,
            timestamp: None,
        }
    }

    /// Serializes the record in the CiteSeer `<record>` layout accepted by
    /// [`parse_record`].
    pub fn to_xml(&self) -> String {
        let mut out = String::new();
        out.push_str("<record>\n  <header>\n");
        out.push_str(&format!(
            "    <identifier>{}</identifier>\n",
            escape(self.id.as_str())
        ));
        if let Some(ts) = &self.timestamp {
            out.push_str(&format!(
                "    <timestamp>{}</timestamp>\n",
                escape(ts.as_str())
            ));
        }
        out.push_str("  </header>\n  <metadata>\n");
        out.push_str(
            "    <oai_citeseer:oai_citeseer \
             xmlns:oai_citeseer=\"http://copper.ist.psu.edu/oai/oai_citeseer/\" \
             xmlns:dc=\"http://purl.org/dc/elements/1.1/\">\n",
        );
        if let Some(title) = &self.title {
            out.push_str(&format!(
                "      <dc:title>{}</dc:title>\n",
                escape(title.as_str())
            ));
        }
        for author in &self.authors {
            out.push_str(&format!(
                "      <oai_citeseer:author name=\"{}\"/>\n",
                escape(author.as_str())
            ));
        }
        for (kind, ids) in [
            (REFERENCES, &self.references),
            (IS_REFERENCED_BY, &self.referenced_by),
        ] {
            for id in ids {
                out.push_str(&format!(
                    "      <oai_citeseer:relation type=\"{kind}\">\n        \
                     <oai_citeseer:uri>{}</oai_citeseer:uri>\n      \
                     </oai_citeseer:relation>\n",
                    escape(id.as_str())
                ));
            }
        }
        if let Some(publisher) = &self.publisher {
            out.push_str(&format!(
                "      <dc:publisher>{}</dc:publisher>\n",
                escape(publisher.as_str())
            ));
        }
        out.push_str("    </oai_citeseer:oai_citeseer>\n  </metadata>\n</record>\n");
        out
    }
}

const REFERENCES: &str = "References";
const IS_REFERENCED_BY: &str = "Is Referenced By";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Relation {
    References,
    ReferencedBy,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Identifier,
    Timestamp,
    Title,
    Publisher,
    Uri,
}

fn split_qname(name: &[u8]) -> (Option<&[u8]>, &[u8]) {
    match name.iter().position(|&b| b == b':') {
        Some(i) => (Some(&name[..i]), &name[i + 1..]),
        None => (None, name),
    }
}

fn attr(e: &BytesStart<'_>, key: &str) -> Result<Option<String>, IngestError> {
    match e.try_get_attribute(key) {
        Ok(Some(a)) => a
            .unescape_value()
            .map(|v| Some(v.into_owned()))
            .map_err(|err| IngestError::MalformedXml(err.to_string())),
        Ok(None) => Ok(None),
        Err(err) => Err(IngestError::MalformedXml(err.to_string())),
    }
}

struct Builder {
    id: Option<String>,
    title: Option<String>,
    timestamp: Option<String>,
    publisher: Option<String>,
    authors: Vec<AuthorKey>,
    references: Vec<String>,
    referenced_by: Vec<String>,
    relation: Option<Relation>,
    capture: Option<(Field, usize)>,
    text: String,
}

impl Builder {
    fn open(&mut self, e: &BytesStart<'_>, depth: usize, empty: bool) -> Result<(), IngestError> {
        let qname = e.name();
        let (prefix, local) = split_qname(qname.as_ref());
        match (prefix, local) {
            (None, b"identifier") if self.id.is_none() => {
                self.start_capture(Field::Identifier, depth)
            }
            (None, b"timestamp") => self.start_capture(Field::Timestamp, depth),
            (Some(b"dc"), b"title") => self.start_capture(Field::Title, depth),
            (Some(b"dc"), b"publisher") => self.start_capture(Field::Publisher, depth),
            (Some(p), b"author") if p != b"dc" => {
                if let Some(name) = attr(e, "name")? {
                    // Nameless or blank author tags carry no identity.
                    if let Ok(key) = normalize_author_name(&name) {
                        if !self.authors.contains(&key) {
                            self.authors.push(key);
                        }
                    }
                }
            }
            (Some(p), b"relation") if p != b"dc" && !empty => {
                self.relation = match attr(e, "type")?.as_deref().map(str::trim) {
                    Some(REFERENCES) => Some(Relation::References),
                    Some(IS_REFERENCED_BY) => Some(Relation::ReferencedBy),
                    _ => None,
                };
            }
            (Some(_), b"uri") if self.relation.is_some() => self.start_capture(Field::Uri, depth),
            _ => {}
        }
        if empty {
            // `<identifier/>` and friends close immediately with no text.
            self.close(depth)?;
        }
        Ok(())
    }

    fn start_capture(&mut self, field: Field, depth: usize) {
        if self.capture.is_none() {
            self.capture = Some((field, depth));
            self.text.clear();
        }
    }

    fn close(&mut self, depth: usize) -> Result<(), IngestError> {
        let Some((field, at)) = self.capture else {
            return Ok(());
        };
        if at != depth {
            return Ok(());
        }
        self.capture = None;
        let value = normalize_whitespace(&self.text);
        if value.is_empty() {
            return Ok(());
        }
        match field {
            Field::Identifier => self.id = Some(value),
            Field::Timestamp => self.timestamp = Some(value),
            Field::Title => self.title = Some(value),
            Field::Publisher => self.publisher = Some(value),
            Field::Uri => match self.relation {
                Some(Relation::References) => self.references.push(value),
                Some(Relation::ReferencedBy) => self.referenced_by.push(value),
                None => {}
            },
        }
        Ok(())
    }
}

fn dedup_ids(raw: Vec<String>, own: &RecordId) -> Vec<RecordId> {
    let mut out: Vec<RecordId> = Vec::with_capacity(raw.len());
    for r in raw {
        if let Ok(id) = RecordId::new(&r) {
            if &id != own && !out.contains(&id) {
                out.push(id);
            }
        }
    }
    out
}

/// Parses one `<record>` element.
///
/// Element prefixes are matched literally rather than resolved through
/// namespace declarations, and end tags are checked by local name. Records
/// that mix the `oi_citeseer:` misspelling with `oai_citeseer:` are accepted.
pub fn parse_record(xml: &str) -> Result<OaiRecord, IngestError> {
    let mut reader = Reader::from_str(xml);
    // End tags are matched on local name only; see the doc comment.
    reader.config_mut().check_end_names = false;

    let mut b = Builder {
        id: None,
        title: None,
        timestamp: None,
        publisher: None,
        authors: Vec::new(),
        references: Vec::new(),
        referenced_by: Vec::new(),
        relation: None,
        capture: None,
        text: String::new(),
    };
    let mut open: Vec<Vec<u8>> = Vec::new();
    let mut saw_element = false;

    loop {
        let event = reader.read_event().map_err(|err| {
            IngestError::MalformedXml(format!("{err} at byte {}", reader.error_position()))
        })?;
        match event {
            Event::Start(e) => {
                open.push(split_qname(e.name().as_ref()).1.to_vec());
                saw_element = true;
                b.open(&e, open.len(), false)?;
            }
            Event::Empty(e) => {
                saw_element = true;
                b.open(&e, open.len() + 1, true)?;
            }
            Event::End(e) => {
                let name = e.name();
                let (_, local) = split_qname(name.as_ref());
                match open.last() {
                    Some(top) if top.as_slice() == local => {}
                    Some(top) => {
                        return Err(IngestError::MalformedXml(format!(
                            "</{}> closes <{}> at byte {}",
                            String::from_utf8_lossy(name.as_ref()),
                            String::from_utf8_lossy(top),
                            reader.buffer_position()
                        )))
                    }
                    None => {
                        return Err(IngestError::MalformedXml(format!(
                            "unexpected </{}>",
                            String::from_utf8_lossy(name.as_ref())
                        )))
                    }
                }
                b.close(open.len())?;
                if local == b"relation" {
                    b.relation = None;
                }
                open.pop();
            }
            Event::Text(t) => {
                if b.capture.is_some() {
                    let text = t
                        .unescape()
                        .map_err(|err| IngestError::MalformedXml(err.to_string()))?;
                    b.text.push_str(&text);
                } else if open.is_empty() && !t.iter().all(u8::is_ascii_whitespace) {
                    return Err(IngestError::MalformedXml(
                        "text outside of the record element".into(),
                    ));
                }
            }
            Event::CData(c) => {
                if b.capture.is_some() {
                    b.text.push_str(&String::from_utf8_lossy(&c));
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !open.is_empty() {
        return Err(IngestError::MalformedXml(format!(
            "{} element(s) left unclosed at end of input",
            open.len()
        )));
    }
    if !saw_element {
        return Err(IngestError::MalformedXml("no elements found".into()));
    }

    let id = match b.id {
        Some(raw) => RecordId::new(&raw).map_err(|_| IngestError::MissingIdentifier)?,
        None => return Err(IngestError::MissingIdentifier),
    };
    let references = dedup_ids(b.references, &id);
    let referenced_by = dedup_ids(b.referenced_by, &id);
    Ok(OaiRecord {
        id,
        title: b.title,
        authors: b.authors,
        references,
        referenced_by,
        publisher: b.publisher,
        timestamp: b.timestamp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CITESEER_99914: &str = r#"<record>
  <header>
    <identifier>oai:CiteSeerPSU:99914</identifier>
    <timestamp>1998-10-05</timestamp>
  </header>
  <metadata>
    <oai_citeseer:oai_citeseer
xmlns:oai_citeseer="http://copper.ist.psu.edu/oai/oai_citeseer/" xmlns:dc
="http://purl.org/dc/elements/1.1/" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"
xsi:schemaLocation="http://copper.ist.psu.edu/oai/oai_citeseer/
http://copper.ist.psu.edu/oai/oai_citeseer.xsd ">
    <dc:title>The Asymptotics of Waiting Times Between Stationary Processes, Allowing
Distortion</dc:title>
    <oi_citeseer:author name="Amir Dembo" />
    <oi_citeseer:author name="Ioannis Kontoyiannis" />
    <dc:description>this paper is to extend these asymptotic...</dc:description>
    <dc:identifier>http://citeseer.ist.psu.edu/99914.html</dc:identifier>
    <dc:source>http://www.stat.purdue.edu/people/yiannis/PAPERS/ms.ps.gz</dc:source>
    <oi_citeseer:relation type="References" >
      <oai_citeseer:uri>oai:CiteSeerPSU:143950</oai_citeseer:uri>
    </oai_citeseer:relation>
    <oi_citeseer:relation type="References" >
      <oai_citeseer:uri>oai:CiteSeerPSU:50737</oai_citeseer:uri>
    </oai_citeseer:relation>
    <oi_citeseer:relation type="Is Referenced By" >
      <oai_citeseer:uri>oai:CiteSeerPSU:308347</oai_citeseer:uri>
    </oai_citeseer:relation>
    <oi_citeseer:relation type="Is Referenced By" >
      <oai_citeseer:uri>oai:CiteSeerPSU:204535</oai_citeseer:uri>
    </oai_citeseer:relation>
    . . .
    <dc:rights>unrestricted</dc:rights>
    <dc:publisher>Annals of Applied Probability</dc:publisher>
  </oai_citeseer:oai_citeseer>
</metadata>
</record>"#;

    fn ids(raw: &[&str]) -> Vec<RecordId> {
        raw.iter().map(|r| RecordId::new(r).unwrap()).collect()
    }

    #[test]
    fn citeseer_record() {
        let r = parse_record(CITESEER_99914).unwrap();
        assert_eq!(r.id.as_str(), "oai:CiteSeerPSU:99914");
        assert_eq!(
            r.authors,
            vec![
                normalize_author_name("Amir Dembo").unwrap(),
                normalize_author_name("Ioannis Kontoyiannis").unwrap()
            ]
        );
        assert_eq!(
            r.references,
            ids(&["oai:CiteSeerPSU:143950", "oai:CiteSeerPSU:50737"])
        );
        assert_eq!(
            r.referenced_by,
            ids(&["oai:CiteSeerPSU:308347", "oai:CiteSeerPSU:204535"])
        );
        assert_eq!(
            r.publisher.as_deref(),
            Some("Annals of Applied Probability")
        );
        assert_eq!(r.timestamp.as_deref(), Some("1998-10-05"));
        assert_eq!(
            r.title.as_deref(),
            Some("The Asymptotics of Waiting Times Between Stationary Processes, Allowing Distortion")
        );
    }

    #[test]
    fn bare_identifier_record() {
        let r =
            parse_record("<record><header><identifier>X</identifier></header></record>").unwrap();
        assert_eq!(r, OaiRecord::new(RecordId::new("X").unwrap()));
    }

    #[test]
    fn duplicate_and_self_references_dropped() {
        let xml = r#"<record><identifier>p1</identifier>
            <m:relation type="References"><m:uri>p2</m:uri></m:relation>
            <m:relation type="References"><m:uri> p2 </m:uri></m:relation>
            <m:relation type="References"><m:uri>p1</m:uri></m:relation>
            <m:relation type="Is Referenced By"><m:uri>p1</m:uri></m:relation>
            <m:author name="Ann Lee"/><m:author name="ann  LEE"/>
            </record>"#;
        let r = parse_record(xml).unwrap();
        assert_eq!(r.references, ids(&["p2"]));
        assert!(r.referenced_by.is_empty());
        assert_eq!(r.authors.len(), 1);
    }

    #[test]
    fn dc_identifier_is_not_the_record_id() {
        let xml = "<record><metadata><dc:identifier>http://x</dc:identifier></metadata></record>";
        assert_eq!(parse_record(xml), Err(IngestError::MissingIdentifier));
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "<record><identifier>x</identifier>",
            "<record><identifier>x</header></record>",
            "<record><identifier>x &bogus; </identifier></record>",
            "",
        ] {
            assert!(
                matches!(parse_record(bad), Err(IngestError::MalformedXml(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn unknown_relation_types_ignored() {
        let xml = r#"<record><identifier>a</identifier>
            <c:relation type="Has Part"><c:uri>b</c:uri></c:relation>
            <c:relation><c:uri>c</c:uri></c:relation></record>"#;
        let r = parse_record(xml).unwrap();
        assert!(r.references.is_empty() && r.referenced_by.is_empty());
    }

    #[test]
    fn parse_is_pure() {
        assert_eq!(parse_record(CITESEER_99914), parse_record(CITESEER_99914));
    }

    proptest::proptest! {
        #[test]
        fn xml_writer_round_trips(
            id in "[a-z]{1,3}:[A-Za-z0-9]{1,8}",
            title in proptest::option::of("[A-Za-z&<> ]{1,20}"),
            authors in proptest::collection::btree_set("[a-z]{1,6} [a-z]{1,8}", 0..5),
            refs in proptest::collection::btree_set("r[0-9]{1,3}", 0..6),
            citers in proptest::collection::btree_set("c[0-9]{1,3}", 0..4),
            publisher in proptest::option::of("[A-Z][a-z]{2,10} & [A-Z][a-z]{2,10}"),
        ) {
            let id = RecordId::new(&id).unwrap();
            let rec = OaiRecord {
                id: id.clone(),
                title: title.map(|t| normalize_whitespace(&t)).filter(|t| !t.is_empty()),
                authors: authors.iter().map(|a| normalize_author_name(a).unwrap()).collect(),
                references: refs.iter().map(|r| RecordId::new(r).unwrap()).collect(),
                referenced_by: citers.iter().map(|r| RecordId::new(r).unwrap()).collect(),
                publisher,
                timestamp: Some("2001-01-01".into()),
            };
            let parsed = parse_record(&rec.to_xml()).unwrap();
            proptest::prop_assert_eq!(parsed, rec);
        }
    }
}
