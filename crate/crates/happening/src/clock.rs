//! Wall clock and the team calendar.

use std::sync::Mutex;

use chrono::{DateTime, NaiveDate, Utc};
use chrono_tz::Tz;
use happening_core::Timestamp;

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// A clock that only moves when told to. Used by tests and tooling.
#[derive(Debug)]
pub struct FixedClock(Mutex<DateTime<Utc>>);

impl FixedClock {
    pub fn new(now: DateTime<Utc>) -> Self {
        Self(Mutex::new(now))
    }

    pub fn set(&self, now: DateTime<Utc>) {
        *self.0.lock().unwrap() = now;
    }
}

impl Clock for FixedClock {
    fn now(&self) -> DateTime<Utc> {
        *self.0.lock().unwrap()
    }
}

/// Calendar dates are interpreted in one team timezone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeamCalendar {
    pub timezone: Tz,
}

impl Default for TeamCalendar {
    fn default() -> Self {
        Self { timezone: Tz::UTC }
    }
}

impl TeamCalendar {
    pub fn today(&self, clock: &dyn Clock) -> NaiveDate {
        clock.now().with_timezone(&self.timezone).date_naive()
    }

    pub fn now(&self, clock: &dyn Clock) -> Timestamp {
        Timestamp::from_datetime(clock.now())
    }
}
