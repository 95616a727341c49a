//! Export and import of live events as JSON lines or CSV.
//!
//! JSON lines carry one event object per line, with the same fields as the
//! log payload. CSV has the header `id,author,priority,event_date,created_at,description`
//! with the description always quoted. Rows are numbered from 1, not
//! counting the CSV header.

use std::io::{self, BufRead, Read, Write};

use happening_core::{Event, EventId, MemberId, Timestamp};
use serde::Deserialize;

use crate::store::{EventStore, ImportedEvent, StoreError};

pub const CSV_HEADER: &str = "id,author,priority,event_date,created_at,description";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum TransferError {
    #[error("row {row}: {reason}")]
    InvalidRow { row: usize, reason: String },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Writes the store's live events in id order.
pub fn export(store: &EventStore, format: Format, out: &mut dyn Write) -> io::Result<usize> {
    let mut count = 0;
    if format == Format::Csv {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for event in store.events() {
        match format {
            Format::Jsonl => {
                serde_json::to_writer(&mut *out, event)?;
                out.write_all(b"\n")?;
            }
            Format::Csv => write_csv_row(out, event)?,
        }
        count += 1;
    }
    out.flush()?;
    Ok(count)
}

fn write_csv_row(out: &mut dyn Write, event: &Event) -> io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},\"{}\"",
        event.id,
        event.author,
        event.priority,
        event.event_date,
        event.created_at,
        event.description.replace('"', "\"\"")
    )
}

#[derive(Deserialize)]
struct Row {
    #[serde(default)]
    id: Option<u64>,
    author: String,
    description: String,
    priority: i64,
    event_date: String,
    created_at: String,
}

impl Row {
    fn into_imported(self, row: usize) -> Result<ImportedEvent, TransferError> {
        let invalid = |reason: String| TransferError::InvalidRow { row, reason };
        let author = MemberId::new(self.author).map_err(|e| invalid(e.to_string()))?;
        let created_at: Timestamp = self
            .created_at
            .parse()
            .map_err(|e: happening_core::TimestampError| invalid(e.to_string()))?;
        Ok(ImportedEvent {
            id: self.id.filter(|id| *id > 0).map(EventId),
            author,
            description: self.description,
            priority: self.priority,
            event_date: self.event_date,
            created_at,
        })
    }
}

/// Parses every row before returning; the first bad row fails the whole
/// input.
pub fn parse(format: Format, input: &mut dyn Read) -> Result<Vec<ImportedEvent>, TransferError> {
    Ok(parse_numbered(format, input)?
        .into_iter()
        .map(|(_, item)| item)
        .collect())
}

fn parse_numbered(
    format: Format,
    input: &mut dyn Read,
) -> Result<Vec<(usize, ImportedEvent)>, TransferError> {
    match format {
        Format::Jsonl => parse_jsonl(input),
        Format::Csv => parse_csv(input),
    }
}

fn parse_jsonl(input: &mut dyn Read) -> Result<Vec<(usize, ImportedEvent)>, TransferError> {
    let mut rows = Vec::new();
    for (index, line) in io::BufReader::new(input).lines().enumerate() {
        let line = line?;
        let row_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(&line).map_err(|e| TransferError::InvalidRow {
            row: row_no,
            reason: e.to_string(),
        })?;
        rows.push((row_no, row.into_imported(row_no)?));
    }
    Ok(rows)
}

fn parse_csv(input: &mut dyn Read) -> Result<Vec<(usize, ImportedEvent)>, TransferError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let mut rows = Vec::new();
    for (index, record) in reader.deserialize::<Row>().enumerate() {
        let row_no = index + 1;
        let row = record.map_err(|e| TransferError::InvalidRow {
            row: row_no,
            reason: e.to_string(),
        })?;
        rows.push((row_no, row.into_imported(row_no)?));
    }
    Ok(rows)
}

/// Parses and appends all rows, or nothing.
pub fn import(
    store: &mut EventStore,
    format: Format,
    input: &mut dyn Read,
    today: chrono::NaiveDate,
) -> Result<Vec<Event>, TransferError> {
    let (row_numbers, items): (Vec<usize>, Vec<ImportedEvent>) =
        parse_numbered(format, input)?.into_iter().unzip();
    store
        .import_events(items, today)
        .map_err(|(index, error)| match error {
            StoreError::ValidationFailed(violations) => TransferError::InvalidRow {
                row: row_numbers[index],
                reason: violations
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "),
            },
            other => TransferError::Store(other),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::NewEvent;
    use happening_core::{parse_date, Member};

    fn today() -> chrono::NaiveDate {
        parse_date("2016-06-30").unwrap()
    }

    fn seeded(dir: &std::path::Path) -> EventStore {
        let mut store = EventStore::open(dir).unwrap();
        store
            .add_member(Member::new("ana", "Ana").unwrap())
            .unwrap();
        for (n, desc) in ["plain", "with, comma", "with \"quotes\"\nand newline"]
            .iter()
            .enumerate()
        {
            store
                .append_event(
                    &NewEvent {
                        author: "ana",
                        description: desc,
                        priority: n as i64 + 1,
                        event_date: "2016-05-01",
                    },
                    today(),
                    "2016-05-01T08:00:00Z".parse().unwrap(),
                )
                .unwrap();
        }
        store
    }

    #[test]
    fn empty_csv_is_just_the_header() {
        let dir = tempfile::tempdir().unwrap();
        let store = EventStore::open(dir.path()).unwrap();
        let mut out = Vec::new();
        assert_eq!(export(&store, Format::Csv, &mut out).unwrap(), 0);
        assert_eq!(String::from_utf8(out).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn tombstoned_events_are_not_exported() {
        let dir = tempfile::tempdir().unwrap();
        let mut store = seeded(dir.path());
        store
            .delete_event(EventId(2), "ana", "2016-05-02T08:00:00Z".parse().unwrap())
            .unwrap();
        let mut out = Vec::new();
        assert_eq!(export(&store, Format::Csv, &mut out).unwrap(), 2);
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with(&format!(
            "{CSV_HEADER}\n1,ana,1,2016-05-01,2016-05-01T08:00:00Z,\"plain\"\n"
        )));
        assert!(!text.contains("comma"));
    }

    #[test]
    fn csv_round_trip_keeps_awkward_descriptions() {
        let dir = tempfile::tempdir().unwrap();
        let store = seeded(dir.path());
        let mut out = Vec::new();
        export(&store, Format::Csv, &mut out).unwrap();

        let target = tempfile::tempdir().unwrap();
        let mut fresh = EventStore::open(target.path()).unwrap();
        let imported = import(&mut fresh, Format::Csv, &mut out.as_slice(), today()).unwrap();
        assert_eq!(imported.len(), 3);
        let original: Vec<_> = store.events().cloned().collect();
        let copied: Vec<_> = fresh.events().cloned().collect();
        assert_eq!(original, copied);
    }

    #[test]
    fn three_rows_import_into_fresh_store() {
        let input = "\
{\"author\":\"a\",\"description\":\"one\",\"priority\":1,\"event_date\":\"2016-05-01\",\"created_at\":\"2016-05-01T08:00:00Z\"}
{\"author\":\"b\",\"description\":\"two\",\"priority\":2,\"event_date\":\"2016-05-02\",\"created_at\":\"2016-05-02T08:00:00Z\"}
{\"author\":\"a\",\"description\":\"three\",\"priority\":3,\"event_date\":\"2016-05-03\",\"created_at\":\"2016-05-03T08:00:00Z\"}
";
        let dir = tempfile::tempdir().unwrap();
        let mut store = EventStore::open(dir.path()).unwrap();
        import(&mut store, Format::Jsonl, &mut input.as_bytes(), today()).unwrap();
        assert_eq!(store.event_count(), 3);
        assert_eq!(store.members().len(), 2);
    }

    #[test]
    fn malformed_row_two_imports_nothing() {
        let csv = format!(
            "{CSV_HEADER}\n1,ana,1,2016-05-01,2016-05-01T08:00:00Z,\"ok\"\n2,ana,one,2016-05-01,2016-05-01T08:00:00Z,\"bad priority\"\n3,ana,1,2016-05-01,2016-05-01T08:00:00Z,\"ok\"\n"
        );
        let dir = tempfile::tempdir().unwrap();
        let mut store = EventStore::open(dir.path()).unwrap();
        let err = import(&mut store, Format::Csv, &mut csv.as_bytes(), today()).unwrap_err();
        assert!(
            matches!(err, TransferError::InvalidRow { row: 2, .. }),
            "{err}"
        );
        assert!(err.to_string().starts_with("row 2:"));
        assert!(store.is_empty());

        let jsonl = "{\"author\":\"a\",\"description\":\"one\",\"priority\":1,\"event_date\":\"2016-05-01\",\"created_at\":\"2016-05-01T08:00:00Z\"}\n{\"author\":\"a\",\"description\":\"  \",\"priority\":1,\"event_date\":\"2016-05-01\",\"created_at\":\"2016-05-01T08:00:00Z\"}\n";
        let err = import(&mut store, Format::Jsonl, &mut jsonl.as_bytes(), today()).unwrap_err();
        assert!(
            matches!(err, TransferError::InvalidRow { row: 2, .. }),
            "{err}"
        );
        assert!(store.is_empty());
    }
}
