//! Line format of `events.log`.
//!
//! ```text
//! {"seq":1,"kind":"member","v":1,"payload":{"id":"ana","display_name":"Ana"}}
//! {"seq":2,"kind":"event","v":1,"payload":{"id":1,"author":"ana",...}}
//! {"seq":3,"kind":"tombstone","v":1,"payload":{"event_id":1,"deleted_by":"ana","deleted_at":"..."}}
//! ```
//!
//! Unknown fields are ignored on read.

use happening_core::{Event, EventId, Member, MemberId, Timestamp};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tombstone {
    pub event_id: EventId,
    pub deleted_by: MemberId,
    pub deleted_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    Member(Member),
    Event(Event),
    Tombstone(Tombstone),
}

#[derive(Serialize)]
struct LineOut<'a, P> {
    seq: u64,
    kind: &'static str,
    v: u32,
    payload: &'a P,
}

#[derive(Deserialize)]
struct LineIn {
    seq: u64,
    kind: String,
    v: u32,
    payload: serde_json::Value,
}

impl Record {
    /// Serialized line including the trailing newline.
    pub fn to_line(&self, seq: u64) -> String {
        let mut line = match self {
            Record::Member(m) => encode(seq, "member", m),
            Record::Event(e) => encode(seq, "event", e),
            Record::Tombstone(t) => encode(seq, "tombstone", t),
        };
        line.push('\n');
        line
    }

    /// Parses one line without its newline.
    pub fn parse(line: &str) -> Result<(u64, Record), String> {
        let raw: LineIn = serde_json::from_str(line).map_err(|e| e.to_string())?;
        if raw.v != FORMAT_VERSION {
            return Err(format!("unsupported record version {}", raw.v));
        }
        let record = match raw.kind.as_str() {
            "member" => Record::Member(decode(raw.payload)?),
            "event" => Record::Event(decode(raw.payload)?),
            "tombstone" => Record::Tombstone(decode(raw.payload)?),
            other => return Err(format!("unknown record kind {other:?}")),
        };
        Ok((raw.seq, record))
    }
}

fn encode<P: Serialize>(seq: u64, kind: &'static str, payload: &P) -> String {
    let line = LineOut {
        seq,
        kind,
        v: FORMAT_VERSION,
        payload,
    };
    serde_json::to_string(&line).expect("record payloads always serialize")
}

fn decode<P: for<'de> Deserialize<'de>>(payload: serde_json::Value) -> Result<P, String> {
    serde_json::from_value(payload).map_err(|e| e.to_string())
}
