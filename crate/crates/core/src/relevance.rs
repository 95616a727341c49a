//! How long an event stays relevant, as a function of its priority.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::event::Event;
use crate::priority::Priority;

/// Relevance window in days for each priority.
///
/// Windows strictly increase with priority, so a more important event is
/// never hidden earlier than a less important one from the same day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u32; 3]", into = "[u32; 3]")]
pub struct RelevancePolicy {
    window_days: [u32; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PolicyError {
    #[error("relevance windows must strictly increase with priority, got {0:?}")]
    NotMonotone([u32; 3]),
}

impl RelevancePolicy {
    pub const DEFAULT_WINDOW_DAYS: [u32; 3] = [2, 7, 30];

    /// Windows for priorities 1, 2 and 3.
    pub fn new(low: u32, normal: u32, high: u32) -> Result<Self, PolicyError> {
        if low < normal && normal < high {
            Ok(Self {
                window_days: [low, normal, high],
            })
        } else {
            Err(PolicyError::NotMonotone([low, normal, high]))
        }
    }

    pub fn window_days(&self, priority: Priority) -> u32 {
        self.window_days[usize::from(priority.level() - 1)]
    }

    /// Relevant iff at most `window` days separate `as_of` from the event
    /// date. Any `as_of` on or before the event date counts as relevant.
    pub fn is_relevant(&self, event_date: NaiveDate, priority: Priority, as_of: NaiveDate) -> bool {
        let elapsed = as_of.signed_duration_since(event_date).num_days();
        elapsed <= i64::from(self.window_days(priority))
    }
}

impl Default for RelevancePolicy {
    fn default() -> Self {
        let [low, normal, high] = Self::DEFAULT_WINDOW_DAYS;
        Self {
            window_days: [low, normal, high],
        }
    }
}

impl TryFrom<[u32; 3]> for RelevancePolicy {
    type Error = PolicyError;

    fn try_from([low, normal, high]: [u32; 3]) -> Result<Self, Self::Error> {
        Self::new(low, normal, high)
    }
}

impl From<RelevancePolicy> for [u32; 3] {
    fn from(policy: RelevancePolicy) -> Self {
        policy.window_days
    }
}

/// Relevance window of `priority` under `policy`, in days.
pub fn relevance_window(policy: &RelevancePolicy, priority: Priority) -> u32 {
    policy.window_days(priority)
}

/// Whether `event` is still relevant when viewed on `as_of`.
pub fn is_relevant_at(event: &Event, as_of: NaiveDate, policy: &RelevancePolicy) -> bool {
    policy.is_relevant(event.event_date, event.priority, as_of)
}
