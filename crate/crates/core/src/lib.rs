//! Core domain of the happening activity tracker.
//!
//! Team members record short, dated entries with a priority from 1 to 3. The
//! priority decides how long an entry stays relevant and how prominently it is
//! displayed. This crate holds the pure part of the system: the value types,
//! input validation, the relevance rules and the summary engine that turns a
//! set of events into a day-grouped listing.
//!
//! Nothing in here performs IO. Persistence, the HTTP API and the command line
//! live in the `happening` crate.

#![no_std]

extern crate alloc;

pub mod event;
pub mod member;
pub mod priority;
pub mod relevance;
pub mod summary;
pub mod time;

pub use event::{validate_event_input, Event, EventId, ValidEventInput, Violation};
pub use member::{Member, MemberDirectory, MemberError, MemberId};
pub use priority::{display_weight, DisplayWeight, InvalidPriority, Priority};
pub use relevance::{is_relevant_at, relevance_window, PolicyError, RelevancePolicy};
pub use summary::{
    catchup, order_entries_within_day, summarize, DayGroup, Period, Summary, SummaryEntry,
    SummaryError, SummaryQuery,
};
pub use time::{parse_date, Timestamp, TimestampError};
