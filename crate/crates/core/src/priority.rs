//! The 1–3 priority scale and the display weight derived from it.

use core::fmt;

use serde::{Deserialize, Serialize};

/// Priority of an event. 3 is the highest: most prominent and relevant for
/// the longest time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct Priority(u8);

/// A priority level outside `1..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("priority must be 1, 2 or 3, got {0}")]
pub struct InvalidPriority(pub i64);

impl Priority {
    /// Priority 1.
    pub const LOW: Priority = Priority(1);
    /// Priority 2.
    pub const NORMAL: Priority = Priority(2);
    /// Priority 3.
    pub const HIGH: Priority = Priority(3);

    /// All priorities in ascending order.
    pub const ALL: [Priority; 3] = [Self::LOW, Self::NORMAL, Self::HIGH];

    pub fn new(level: i64) -> Result<Self, InvalidPriority> {
        match level {
            1..=3 => Ok(Priority(level as u8)),
            other => Err(InvalidPriority(other)),
        }
    }

    pub fn level(self) -> u8 {
        self.0
    }
}

impl TryFrom<i64> for Priority {
    type Error = InvalidPriority;

    fn try_from(level: i64) -> Result<Self, Self::Error> {
        Self::new(level)
    }
}

impl From<Priority> for u8 {
    fn from(priority: Priority) -> u8 {
        priority.0
    }
}

impl fmt::Display for Priority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Avatar size class used when rendering an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisplayWeight {
    Small,
    Medium,
    Large,
}

impl DisplayWeight {
    pub fn as_str(self) -> &'static str {
        match self {
            DisplayWeight::Small => "small",
            DisplayWeight::Medium => "medium",
            DisplayWeight::Large => "large",
        }
    }
}

/// Lower priority renders smaller.
pub fn display_weight(priority: Priority) -> DisplayWeight {
    match priority.level() {
        1 => DisplayWeight::Small,
        2 => DisplayWeight::Medium,
        _ => DisplayWeight::Large,
    }
}
