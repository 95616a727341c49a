//! Day-grouped summaries over a period, and the catch-up view for members
//! returning from an absence.
//!
//! A summary contains every event dated inside the period, optionally minus
//! the ones whose relevance window has elapsed at the viewing date. Days are
//! listed newest first and omitted when empty. Within a day entries are
//! ordered by priority (highest first), then creation time, then id, which is
//! a total order, so the output depends only on the inputs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::event::{Event, EventId};
use crate::member::{MemberDirectory, MemberId};
use crate::priority::{display_weight, DisplayWeight};
use crate::relevance::RelevancePolicy;

/// Inclusive date range with `from <= to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPeriod")]
pub struct Period {
    from: NaiveDate,
    to: NaiveDate,
}

#[derive(Deserialize)]
struct RawPeriod {
    from: NaiveDate,
    to: NaiveDate,
}

impl TryFrom<RawPeriod> for Period {
    type Error = SummaryError;

    fn try_from(raw: RawPeriod) -> Result<Self, Self::Error> {
        Period::new(raw.from, raw.to)
    }
}

impl Period {
    pub fn new(from: NaiveDate, to: NaiveDate) -> Result<Self, SummaryError> {
        if from > to {
            Err(SummaryError::InvalidRange { from, to })
        } else {
            Ok(Self { from, to })
        }
    }

    pub fn single_day(day: NaiveDate) -> Self {
        Self { from: day, to: day }
    }

    pub fn from(&self) -> NaiveDate {
        self.from
    }

    pub fn to(&self) -> NaiveDate {
        self.to
    }

    pub fn contains(&self, day: NaiveDate) -> bool {
        self.from <= day && day <= self.to
    }
}

/// What to summarize. `as_of` is the viewing date used for stale hiding and
/// may lie anywhere relative to the period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SummaryQuery {
    pub period: Period,
    pub hide_stale: bool,
    pub as_of: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub event: Event,
    pub author_name: String,
    pub weight: DisplayWeight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayGroup {
    pub date: NaiveDate,
    pub entries: Vec<SummaryEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub query: SummaryQuery,
    pub days: Vec<DayGroup>,
    pub total_count: usize,
}

impl Summary {
    /// Ids of all included events, in display order.
    pub fn event_ids(&self) -> impl Iterator<Item = EventId> + '_ {
        self.days
            .iter()
            .flat_map(|day| day.entries.iter().map(|entry| entry.event.id))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SummaryError {
    #[error("event {event} references unknown author {author:?}")]
    UnknownAuthor { event: EventId, author: MemberId },
    #[error("unknown member {0:?}")]
    UnknownMember(String),
    #[error("invalid range: {from} is after {to}")]
    InvalidRange { from: NaiveDate, to: NaiveDate },
}

/// The presentation order within one day.
fn entry_order(a: &SummaryEntry, b: &SummaryEntry) -> Ordering {
    let key = |e: &SummaryEntry| (Reverse(e.event.priority), e.event.created_at, e.event.id);
    key(a).cmp(&key(b))
}

/// Sorts the entries of one day by priority descending, then `created_at`
/// ascending, then id ascending.
pub fn order_entries_within_day(mut entries: Vec<SummaryEntry>) -> Vec<SummaryEntry> {
    entries.sort_by(entry_order);
    entries
}

/// Builds the summary of `events` for `query`.
///
/// Every event must have an author present in `members`, even the ones the
/// query filters out.
pub fn summarize<'a, I, D>(
    events: I,
    members: &D,
    query: &SummaryQuery,
    policy: &RelevancePolicy,
) -> Result<Summary, SummaryError>
where
    I: IntoIterator<Item = &'a Event>,
    D: MemberDirectory + ?Sized,
{
    let mut by_day: BTreeMap<NaiveDate, Vec<SummaryEntry>> = BTreeMap::new();
    for event in events {
        let author =
            members
                .member(event.author.as_str())
                .ok_or_else(|| SummaryError::UnknownAuthor {
                    event: event.id,
                    author: event.author.clone(),
                })?;
        if !query.period.contains(event.event_date) {
            continue;
        }
        if query.hide_stale && !policy.is_relevant(event.event_date, event.priority, query.as_of) {
            continue;
        }
        by_day
            .entry(event.event_date)
            .or_default()
            .push(SummaryEntry {
                event: event.clone(),
                author_name: author.display_name.clone(),
                weight: display_weight(event.priority),
            });
    }

    let days: Vec<DayGroup> = by_day
        .into_iter()
        .rev()
        .map(|(date, entries)| DayGroup {
            date,
            entries: order_entries_within_day(entries),
        })
        .collect();
    let total_count = days.iter().map(|day| day.entries.len()).sum();
    Ok(Summary {
        query: *query,
        days,
        total_count,
    })
}

/// Summary of everything that happened from `since` through `as_of`, for a
/// member catching up after an absence. The member's own events are kept.
#[allow(clippy::too_many_arguments)]
pub fn catchup<'a, I, D>(
    events: I,
    members: &D,
    member: &str,
    since: NaiveDate,
    as_of: NaiveDate,
    hide_stale: bool,
    policy: &RelevancePolicy,
) -> Result<Summary, SummaryError>
where
    I: IntoIterator<Item = &'a Event>,
    D: MemberDirectory + ?Sized,
{
    if members.member(member).is_none() {
        return Err(SummaryError::UnknownMember(member.into()));
    }
    let query = SummaryQuery {
        period: Period::new(since, as_of)?,
        hide_stale,
        as_of,
    };
    summarize(events, members, &query, policy)
}
