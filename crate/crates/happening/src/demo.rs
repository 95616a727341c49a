//! Fixed demo team for trying the tool out.

use chrono::{Days, NaiveDate};
use happening_core::{Member, Timestamp};

use crate::store::{EventStore, NewEvent, StoreError};

pub const DEMO_MEMBERS: [(&str, &str); 8] = [
    ("lena", "Lena Vogt"),
    ("omar", "Omar Haddad"),
    ("jonas", "Jonas Berg"),
    ("mia", "Mia Kowalski"),
    ("tobias", "Tobias Lang"),
    ("sofia", "Sofia Almeida"),
    ("erik", "Erik Lindqvist"),
    ("hanna", "Hanna Roth"),
];

/// (author, days before today, priority, description)
pub const DEMO_EVENTS: [(&str, u64, i64, &str); 24] = [
    (
        "erik",
        29,
        3,
        "Agreed with operations on a monthly maintenance window, first Tuesday 06:00",
    ),
    (
        "lena",
        27,
        2,
        "Sprint 14 planning done, focus on the export API",
    ),
    ("omar", 26, 1, "Updated the onboarding wiki page"),
    (
        "sofia",
        24,
        3,
        "Customer escalation: invoices rounded wrongly, hotfix planned",
    ),
    (
        "jonas",
        23,
        2,
        "Paired with Mia on the flaky integration tests",
    ),
    ("mia", 21, 1, "Cleaned up unused feature flags"),
    (
        "tobias",
        20,
        3,
        "Decision: we move the build to the new CI cluster next sprint",
    ),
    ("hanna", 18, 2, "Reviewed the accessibility audit findings"),
    ("lena", 16, 1, "Moved retro to Thursday this week"),
    (
        "omar",
        15,
        3,
        "Deployed hotfix 2.1.4 for the invoice rounding issue",
    ),
    (
        "erik",
        13,
        2,
        "Stockholm office VPN change, new config in the team drive",
    ),
    ("sofia", 12, 1, "Demo prepared for the sprint review"),
    (
        "jonas",
        11,
        2,
        "Database migration rehearsal succeeded on staging",
    ),
    (
        "mia",
        9,
        3,
        "Security patch for the auth library must be rolled out by Friday",
    ),
    ("tobias", 8, 1, "Ordered new test devices"),
    ("hanna", 7, 2, "Started on the search relevance spike"),
    (
        "lena",
        6,
        3,
        "Product owner changed priority: export API before reporting",
    ),
    ("omar", 5, 1, "Tidied the backlog labels"),
    (
        "erik",
        4,
        2,
        "Working from Stockholm until the end of the month",
    ),
    ("sofia", 3, 1, "Fixed typo in the release notes"),
    (
        "jonas",
        2,
        3,
        "Staging database is down, restore in progress",
    ),
    ("mia", 1, 2, "Auth library patch rolled out to all services"),
    ("tobias", 0, 1, "Build now runs on the new CI cluster"),
    (
        "hanna",
        0,
        2,
        "Search spike results shared in the team channel",
    ),
];

/// Fills an empty store with the demo team and events dated relative to
/// `today`. Refuses to touch a store that already has records.
pub fn seed(store: &mut EventStore, today: NaiveDate, now: Timestamp) -> Result<(), StoreError> {
    if !store.is_empty() {
        return Err(StoreError::NotEmpty);
    }
    for (id, name) in DEMO_MEMBERS {
        store.add_member(Member::new(id, name).expect("demo members are valid"))?;
    }
    for (author, days_ago, priority, description) in DEMO_EVENTS {
        let date = today
            .checked_sub_days(Days::new(days_ago))
            .expect("demo dates are in range")
            .to_string();
        store.append_event(
            &NewEvent {
                author,
                description,
                priority,
                event_date: &date,
            },
            today,
            now,
        )?;
    }
    Ok(())
}
