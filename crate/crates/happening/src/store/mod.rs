//! Append-only event log with tombstone deletion and compaction.
//!
//! All state lives in one `events.log` file inside the data directory and is
//! replayed into memory on open. A line missing its terminating newline at the
//! end of the file is the signature of an interrupted write: it is dropped
//! with a warning and cut off before the next append. Any other line that does
//! not parse makes the store refuse to open.
//!
//! A `happening.lock` file next to the log is held with an exclusive lock for
//! the lifetime of the handle, so a running server and an import or export
//! never touch the same log.

mod record;

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use happening_core::{
    validate_event_input, Event, EventId, Member, MemberId, Timestamp, Violation,
};

pub use record::{Record, Tombstone, FORMAT_VERSION};

pub const LOG_FILE: &str = "events.log";
pub const LOCK_FILE: &str = "happening.lock";
const COMPACT_TMP: &str = "events.log.tmp";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("corrupt record on line {line}: {reason}")]
    CorruptRecord { line: usize, reason: String },
    #[error("store in {0} is in use by another process")]
    Locked(PathBuf),
    #[error("unknown author {0:?}")]
    UnknownAuthor(String),
    #[error("event input is invalid: {}", describe(.0))]
    ValidationFailed(Vec<Violation>),
    #[error("member {0} already exists")]
    DuplicateMember(MemberId),
    #[error("event {0} not found")]
    NotFound(EventId),
    #[error("member {requester:?} may not delete event {event}")]
    Forbidden { event: EventId, requester: String },
    #[error("invalid range: {from} is after {to}")]
    InvalidRange { from: NaiveDate, to: NaiveDate },
    #[error("store is not empty")]
    NotEmpty,
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn describe(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Raw, unvalidated input for a new event.
#[derive(Debug, Clone)]
pub struct NewEvent<'a> {
    pub author: &'a str,
    pub description: &'a str,
    pub priority: i64,
    pub event_date: &'a str,
}

/// An event coming from an import. Validated again before it is written.
#[derive(Debug, Clone)]
pub struct ImportedEvent {
    /// Kept when it is still unused in the target store.
    pub id: Option<EventId>,
    pub author: MemberId,
    pub description: String,
    pub priority: i64,
    pub event_date: String,
    pub created_at: Timestamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompactStats {
    pub records_before: usize,
    pub records_after: usize,
}

pub struct EventStore {
    data_dir: PathBuf,
    log: File,
    _lock: File,
    /// Bytes of the log covered by complete records.
    valid_len: u64,
    torn_tail: bool,
    next_seq: u64,
    next_event_id: u64,
    records: usize,
    events: BTreeMap<EventId, Event>,
    members: BTreeMap<MemberId, Member>,
    /// The highest id ever assigned, when that event has been deleted.
    /// Compaction keeps it so the id is never handed out again.
    deleted_tail: Option<(Event, Tombstone)>,
    warnings: Vec<String>,
}

impl std::fmt::Debug for EventStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EventStore")
            .field("data_dir", &self.data_dir)
            .field("events", &self.events.len())
            .field("members", &self.members.len())
            .field("next_event_id", &self.next_event_id)
            .finish()
    }
}

impl EventStore {
    /// Opens the store in an existing directory and replays its log.
    pub fn open(data_dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let data_dir = data_dir.as_ref().to_path_buf();
        if !data_dir.is_dir() {
            return Err(StoreError::Io(io::Error::new(
                io::ErrorKind::NotFound,
                format!("data directory {} does not exist", data_dir.display()),
            )));
        }

        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(data_dir.join(LOCK_FILE))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(fs::TryLockError::WouldBlock) => return Err(StoreError::Locked(data_dir)),
            Err(fs::TryLockError::Error(e)) => return Err(e.into()),
        }

        let mut log = OpenOptions::new()
            .create(true)
            .truncate(false)
            .read(true)
            .append(true)
            .open(data_dir.join(LOG_FILE))?;
        let mut bytes = Vec::new();
        log.read_to_end(&mut bytes)?;

        let mut store = Self {
            data_dir,
            log,
            _lock: lock,
            valid_len: 0,
            torn_tail: false,
            next_seq: 1,
            next_event_id: 1,
            records: 0,
            events: BTreeMap::new(),
            members: BTreeMap::new(),
            deleted_tail: None,
            warnings: Vec::new(),
        };
        store.replay(&bytes)?;
        Ok(store)
    }

    fn replay(&mut self, bytes: &[u8]) -> Result<(), StoreError> {
        let mut offset = 0usize;
        let mut line_no = 0usize;
        while offset < bytes.len() {
            line_no += 1;
            let Some(len) = bytes[offset..].iter().position(|b| *b == b'\n') else {
                self.torn_tail = true;
                self.warnings.push(format!(
                    "ignoring {} bytes of an incomplete record at the end of {LOG_FILE} (line {line_no})",
                    bytes.len() - offset
                ));
                break;
            };
            let corrupt = |reason: String| StoreError::CorruptRecord {
                line: line_no,
                reason,
            };
            let line = std::str::from_utf8(&bytes[offset..offset + len])
                .map_err(|e| corrupt(e.to_string()))?;
            let (seq, record) = Record::parse(line).map_err(corrupt)?;
            if seq < self.next_seq {
                return Err(corrupt(format!("sequence number {seq} does not increase")));
            }
            self.check(&record).map_err(corrupt)?;
            self.apply(record);
            self.next_seq = seq + 1;
            offset += len + 1;
        }
        self.valid_len = offset as u64;
        Ok(())
    }

    /// Structural rules a record must satisfy against the current state.
    fn check(&self, record: &Record) -> Result<(), String> {
        match record {
            Record::Member(m) if self.members.contains_key(&m.id) => {
                Err(format!("member {} defined twice", m.id))
            }
            Record::Event(e) if e.id.0 < self.next_event_id || e.id.0 == 0 => {
                Err(format!("event id {} is not fresh", e.id))
            }
            Record::Event(e) if !self.members.contains_key(&e.author) => {
                Err(format!("event {} has unknown author {}", e.id, e.author))
            }
            Record::Tombstone(t) if !self.events.contains_key(&t.event_id) => Err(format!(
                "tombstone for event {} which is not live",
                t.event_id
            )),
            _ => Ok(()),
        }
    }

    fn apply(&mut self, record: Record) {
        self.records += 1;
        match record {
            Record::Member(m) => {
                self.members.insert(m.id.clone(), m);
            }
            Record::Event(e) => {
                self.next_event_id = e.id.0 + 1;
                self.deleted_tail = None;
                self.events.insert(e.id, e);
            }
            Record::Tombstone(t) => {
                if let Some(event) = self.events.remove(&t.event_id) {
                    if event.id.0 + 1 == self.next_event_id {
                        self.deleted_tail = Some((event, t));
                    }
                }
            }
        }
    }

    /// Appends records as one write and flushes them to disk before updating
    /// the in-memory state.
    fn write(&mut self, records: Vec<Record>) -> Result<(), StoreError> {
        if records.is_empty() {
            return Ok(());
        }
        if self.torn_tail {
            self.log.set_len(self.valid_len)?;
            self.torn_tail = false;
        }
        let mut buf = String::new();
        for (i, record) in records.iter().enumerate() {
            buf.push_str(&record.to_line(self.next_seq + i as u64));
        }
        let written = self
            .log
            .write_all(buf.as_bytes())
            .and_then(|()| self.log.sync_data());
        if let Err(e) = written {
            // leave no half line behind for the next append to extend
            let _ = self.log.set_len(self.valid_len);
            return Err(e.into());
        }
        self.valid_len += buf.len() as u64;
        self.next_seq += records.len() as u64;
        for record in records {
            self.apply(record);
        }
        Ok(())
    }

    pub fn add_member(&mut self, member: Member) -> Result<Member, StoreError> {
        if self.members.contains_key(&member.id) {
            return Err(StoreError::DuplicateMember(member.id));
        }
        self.write(vec![Record::Member(member.clone())])?;
        Ok(member)
    }

    /// Validates and appends a new event. `today` is the team's current date
    /// and `now` becomes its `created_at`.
    pub fn append_event(
        &mut self,
        input: &NewEvent<'_>,
        today: NaiveDate,
        now: Timestamp,
    ) -> Result<Event, StoreError> {
        let valid =
            validate_event_input(input.description, input.priority, input.event_date, today)
                .map_err(StoreError::ValidationFailed)?;
        let Some(author) = self.members.get(input.author) else {
            return Err(StoreError::UnknownAuthor(input.author.into()));
        };
        let event = Event {
            id: EventId(self.next_event_id),
            author: author.id.clone(),
            description: valid.description,
            priority: valid.priority,
            event_date: valid.event_date,
            created_at: now,
        };
        self.write(vec![Record::Event(event.clone())])?;
        Ok(event)
    }

    /// Appends imported events in order, all or nothing. Unknown authors are
    /// created with their id as display name. A requested id is kept when it
    /// is higher than every id used so far, otherwise the next free id is
    /// assigned.
    ///
    /// On a validation failure the error carries the zero-based index of the
    /// offending item.
    pub fn import_events(
        &mut self,
        items: Vec<ImportedEvent>,
        today: NaiveDate,
    ) -> Result<Vec<Event>, (usize, StoreError)> {
        let mut new_members: BTreeMap<MemberId, Member> = BTreeMap::new();
        let mut events = Vec::with_capacity(items.len());
        let mut next_id = self.next_event_id;
        for (index, item) in items.into_iter().enumerate() {
            let valid =
                validate_event_input(&item.description, item.priority, &item.event_date, today)
                    .map_err(|v| (index, StoreError::ValidationFailed(v)))?;
            if !self.members.contains_key(&item.author) {
                new_members
                    .entry(item.author.clone())
                    .or_insert_with(|| Member {
                        id: item.author.clone(),
                        display_name: item.author.to_string(),
                    });
            }
            let id = item.id.map_or(next_id, |wanted| wanted.0.max(next_id));
            next_id = id + 1;
            events.push(Event {
                id: EventId(id),
                author: item.author,
                description: valid.description,
                priority: valid.priority,
                event_date: valid.event_date,
                created_at: item.created_at,
            });
        }
        let records = new_members
            .into_values()
            .map(Record::Member)
            .chain(events.iter().cloned().map(Record::Event))
            .collect();
        self.write(records).map_err(|e| (0, e))?;
        Ok(events)
    }

    /// Tombstones a live event. Only its author may delete it.
    pub fn delete_event(
        &mut self,
        id: EventId,
        requester: &str,
        now: Timestamp,
    ) -> Result<(), StoreError> {
        let event = self.events.get(&id).ok_or(StoreError::NotFound(id))?;
        if event.author.as_str() != requester {
            return Err(StoreError::Forbidden {
                event: id,
                requester: requester.into(),
            });
        }
        let tombstone = Tombstone {
            event_id: id,
            deleted_by: event.author.clone(),
            deleted_at: now,
        };
        self.write(vec![Record::Tombstone(tombstone)])
    }

    /// Live events dated within `[from, to]`, in id order.
    pub fn scan_events(&self, from: NaiveDate, to: NaiveDate) -> Result<Vec<Event>, StoreError> {
        if from > to {
            return Err(StoreError::InvalidRange { from, to });
        }
        Ok(self
            .events
            .values()
            .filter(|e| from <= e.event_date && e.event_date <= to)
            .cloned()
            .collect())
    }

    /// Rewrites the log with only members and live events. The new log is
    /// written beside the old one and renamed over it; on failure the old
    /// log stays in place.
    pub fn compact(&mut self) -> Result<CompactStats, StoreError> {
        let records_before = self.records;
        let mut records: Vec<Record> = self.members.values().cloned().map(Record::Member).collect();
        records.extend(self.events.values().cloned().map(Record::Event));
        if let Some((event, tombstone)) = &self.deleted_tail {
            records.push(Record::Event(event.clone()));
            records.push(Record::Tombstone(tombstone.clone()));
        }
        let mut buf = String::new();
        for (i, record) in records.iter().enumerate() {
            buf.push_str(&record.to_line(i as u64 + 1));
        }

        let tmp_path = self.data_dir.join(COMPACT_TMP);
        let log_path = self.data_dir.join(LOG_FILE);
        let swapped = (|| -> io::Result<File> {
            let mut tmp = File::create(&tmp_path)?;
            tmp.write_all(buf.as_bytes())?;
            tmp.sync_all()?;
            drop(tmp);
            fs::rename(&tmp_path, &log_path)?;
            if let Ok(dir) = File::open(&self.data_dir) {
                let _ = dir.sync_all();
            }
            let mut log = OpenOptions::new().read(true).append(true).open(&log_path)?;
            log.seek(SeekFrom::End(0))?;
            Ok(log)
        })();
        let log = match swapped {
            Ok(log) => log,
            Err(e) => {
                let _ = fs::remove_file(&tmp_path);
                return Err(e.into());
            }
        };

        self.log = log;
        self.valid_len = buf.len() as u64;
        self.torn_tail = false;
        self.next_seq = records.len() as u64 + 1;
        self.records = records.len();
        Ok(CompactStats {
            records_before,
            records_after: self.records,
        })
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    pub fn log_path(&self) -> PathBuf {
        self.data_dir.join(LOG_FILE)
    }

    /// Live events in id order.
    pub fn events(&self) -> impl Iterator<Item = &Event> + '_ {
        self.events.values()
    }

    pub fn event(&self, id: EventId) -> Option<&Event> {
        self.events.get(&id)
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn members(&self) -> &BTreeMap<MemberId, Member> {
        &self.members
    }

    pub fn next_event_id(&self) -> EventId {
        EventId(self.next_event_id)
    }

    /// Number of records in the log file.
    pub fn record_count(&self) -> usize {
        self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records == 0
    }

    /// Problems found while opening that did not prevent it.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}
