//! Events and the validation applied to user input before one is stored.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::member::MemberId;
use crate::priority::Priority;
use crate::time::{parse_date, Timestamp};

/// Maximum description length, counted in characters after trimming.
pub const MAX_DESCRIPTION_CHARS: usize = 280;

/// Store-assigned event id. Positive and never reused within a store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub u64);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One tracked activity.
///
/// Field names match the on-disk payload and the wire protocol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub id: EventId,
    pub author: MemberId,
    pub description: String,
    pub priority: Priority,
    pub event_date: NaiveDate,
    pub created_at: Timestamp,
}

/// A rule broken by event input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyDescription,
    DescriptionTooLong {
        chars: usize,
    },
    ControlCharacter,
    InvalidPriority {
        given: i64,
    },
    FutureEventDate {
        event_date: NaiveDate,
        today: NaiveDate,
    },
    InvalidDate {
        given: String,
    },
}

impl Violation {
    /// Stable rule name, used as the `rule` of API error details.
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::EmptyDescription => "EmptyDescription",
            Violation::DescriptionTooLong { .. } => "DescriptionTooLong",
            Violation::ControlCharacter => "ControlCharacter",
            Violation::InvalidPriority { .. } => "InvalidPriority",
            Violation::FutureEventDate { .. } => "FutureEventDate",
            Violation::InvalidDate { .. } => "InvalidDate",
        }
    }

    /// Input field the rule applies to.
    pub fn field(&self) -> &'static str {
        match self {
            Violation::EmptyDescription
            | Violation::DescriptionTooLong { .. }
            | Violation::ControlCharacter => "description",
            Violation::InvalidPriority { .. } => "priority",
            Violation::FutureEventDate { .. } | Violation::InvalidDate { .. } => "event_date",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDescription => f.write_str("description must not be empty"),
            Violation::DescriptionTooLong { chars } => write!(
                f,
                "description has {chars} characters, at most {MAX_DESCRIPTION_CHARS} allowed"
            ),
            Violation::ControlCharacter => {
                f.write_str("description may not contain control characters other than newline")
            }
            Violation::InvalidPriority { given } => {
                write!(f, "priority must be 1, 2 or 3, got {given}")
            }
            Violation::FutureEventDate { event_date, today } => {
                write!(f, "event date {event_date} is after today ({today})")
            }
            Violation::InvalidDate { given } => {
                write!(f, "event date {given:?} is not a YYYY-MM-DD date")
            }
        }
    }
}

/// Input that passed every rule of [`validate_event_input`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidEventInput {
    pub description: String,
    pub priority: Priority,
    pub event_date: NaiveDate,
}

/// Checks raw event input against every rule and reports all violations, in
/// field order (description, priority, date).
///
/// The description is trimmed before it is measured. A date that does not
/// parse is reported as `InvalidDate` and skips the future-date rule.
pub fn validate_event_input(
    description: &str,
    priority_level: i64,
    event_date: &str,
    today: NaiveDate,
) -> Result<ValidEventInput, Vec<Violation>> {
    let mut violations = Vec::new();

    let trimmed = description.trim();
    let chars = trimmed.chars().count();
    if chars == 0 {
        violations.push(Violation::EmptyDescription);
    } else if chars > MAX_DESCRIPTION_CHARS {
        violations.push(Violation::DescriptionTooLong { chars });
    }
    if trimmed.chars().any(|c| c.is_control() && c != '\n') {
        violations.push(Violation::ControlCharacter);
    }

    let priority = Priority::new(priority_level);
    if priority.is_err() {
        violations.push(Violation::InvalidPriority {
            given: priority_level,
        });
    }

    let date = parse_date(event_date);
    match date {
        None => violations.push(Violation::InvalidDate {
            given: event_date.into(),
        }),
        Some(date) if date > today => violations.push(Violation::FutureEventDate {
            event_date: date,
            today,
        }),
        Some(_) => {}
    }

    match (priority, date) {
        (Ok(priority), Some(event_date)) if violations.is_empty() => Ok(ValidEventInput {
            description: trimmed.into(),
            priority,
            event_date,
        }),
        _ => Err(violations),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn day(text: &str) -> NaiveDate {
        parse_date(text).unwrap()
    }

    #[test]
    fn all_rules_pass() {
        let valid =
            validate_event_input("Deployed hotfix 2.1.4", 3, "2016-05-10", day("2016-05-10"))
                .unwrap();
        assert_eq!(valid.priority, Priority::HIGH);
        assert_eq!(valid.description, "Deployed hotfix 2.1.4");
        assert_eq!(valid.event_date, day("2016-05-10"));
    }

    #[test]
    fn whitespace_only_is_empty() {
        let err = validate_event_input("   ", 2, "2016-05-10", day("2016-05-10")).unwrap_err();
        assert_eq!(err, vec![Violation::EmptyDescription]);
    }

    #[test]
    fn every_violation_is_reported() {
        let err = validate_event_input("x", 4, "2016-05-11", day("2016-05-10")).unwrap_err();
        assert_eq!(
            err,
            vec![
                Violation::InvalidPriority { given: 4 },
                Violation::FutureEventDate {
                    event_date: day("2016-05-11"),
                    today: day("2016-05-10")
                },
            ]
        );
    }

    #[test]
    fn unparseable_date() {
        let err = validate_event_input("ok", 1, "10.05.2016", day("2016-05-10")).unwrap_err();
        assert_eq!(
            err,
            vec![Violation::InvalidDate {
                given: "10.05.2016".into()
            }]
        );
        assert_eq!(err[0].field(), "event_date");
    }

    #[test]
    fn length_is_counted_in_characters_after_trimming() {
        let today = day("2016-05-10");
        let at_limit = "ü".repeat(280);
        assert!(
            validate_event_input(&alloc::format!("  {at_limit}\n"), 1, "2016-05-10", today).is_ok()
        );
        let over = "ü".repeat(281);
        assert_eq!(
            validate_event_input(&over, 1, "2016-05-10", today).unwrap_err(),
            vec![Violation::DescriptionTooLong { chars: 281 }]
        );
    }

    #[test]
    fn newline_allowed_other_controls_not() {
        let today = day("2016-05-10");
        assert!(validate_event_input("line one\nline two", 1, "2016-05-10", today).is_ok());
        let err = validate_event_input("tab\there", 1, "2016-05-10", today).unwrap_err();
        assert_eq!(err, vec![Violation::ControlCharacter]);
        assert_eq!(err[0].rule(), "ControlCharacter");
    }

    #[test]
    fn event_json_shape() {
        let event = Event {
            id: EventId(1),
            author: MemberId::new("m1").unwrap(),
            description: "Sprint review moved".into(),
            priority: Priority::NORMAL,
            event_date: day("2016-05-10"),
            created_at: "2016-05-10T08:00:00Z".parse().unwrap(),
        };
        let json = serde_json::to_string(&event).unwrap();
        assert_eq!(
            json,
            r#"{"id":1,"author":"m1","description":"Sprint review moved","priority":2,"event_date":"2016-05-10","created_at":"2016-05-10T08:00:00Z"}"#
        );
        assert_eq!(serde_json::from_str::<Event>(&json).unwrap(), event);
        assert_eq!(
            Violation::EmptyDescription.to_string(),
            "description must not be empty"
        );
    }
}
