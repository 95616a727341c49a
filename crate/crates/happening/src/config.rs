//! Server configuration: an optional flat JSON file plus environment
//! variables.
//!
//! ```json
//! {
//!   "relevance_days_1": 2,
//!   "relevance_days_2": 7,
//!   "relevance_days_3": 30,
//!   "timezone": "Europe/Berlin",
//!   "auth_enabled": true,
//!   "cors_allowed_origins": ["*"]
//! }
//! ```
//!
//! Every key is optional. `HAPPENING_TZ` overrides `timezone`. The bearer
//! token itself only ever comes from `HAPPENING_TOKEN`; auth is on when the
//! token is set, unless `auth_enabled` says otherwise.

use std::path::Path;

use chrono_tz::Tz;
use happening_core::{PolicyError, RelevancePolicy};
use serde::Deserialize;

use crate::clock::TeamCalendar;

pub const TOKEN_ENV: &str = "HAPPENING_TOKEN";
pub const TZ_ENV: &str = "HAPPENING_TZ";

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub relevance_days_1: Option<u32>,
    pub relevance_days_2: Option<u32>,
    pub relevance_days_3: Option<u32>,
    pub timezone: Option<String>,
    pub auth_enabled: Option<bool>,
    pub cors_allowed_origins: Option<Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("unknown timezone {0:?}")]
    Timezone(String),
    #[error("auth_enabled is set but {TOKEN_ENV} is empty or missing")]
    MissingToken,
}

/// Effective settings after merging file, environment and defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub policy: RelevancePolicy,
    pub calendar: TeamCalendar,
    pub auth_token: Option<String>,
    pub cors_allowed_origins: Vec<String>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            policy: RelevancePolicy::default(),
            calendar: TeamCalendar::default(),
            auth_token: None,
            cors_allowed_origins: vec!["*".into()],
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    /// Merges with the given environment lookups.
    pub fn resolve(
        &self,
        tz_env: Option<String>,
        token_env: Option<String>,
    ) -> Result<Settings, ConfigError> {
        let [low, normal, high] = RelevancePolicy::DEFAULT_WINDOW_DAYS;
        let policy = RelevancePolicy::new(
            self.relevance_days_1.unwrap_or(low),
            self.relevance_days_2.unwrap_or(normal),
            self.relevance_days_3.unwrap_or(high),
        )?;

        let tz_name = tz_env
            .filter(|v| !v.trim().is_empty())
            .or_else(|| self.timezone.clone());
        let timezone = match tz_name {
            Some(name) => name
                .trim()
                .parse::<Tz>()
                .map_err(|_| ConfigError::Timezone(name.clone()))?,
            None => Tz::UTC,
        };

        let token = token_env.filter(|t| !t.is_empty());
        let auth_token = match self.auth_enabled {
            Some(false) => None,
            Some(true) => Some(token.ok_or(ConfigError::MissingToken)?),
            None => token,
        };

        Ok(Settings {
            policy,
            calendar: TeamCalendar { timezone },
            auth_token,
            cors_allowed_origins: self
                .cors_allowed_origins
                .clone()
                .unwrap_or_else(|| vec!["*".into()]),
        })
    }

    /// Like [`resolve`](Self::resolve), reading the process environment.
    pub fn resolve_from_env(&self) -> Result<Settings, ConfigError> {
        self.resolve(std::env::var(TZ_ENV).ok(), std::env::var(TOKEN_ENV).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use happening_core::Priority;

    #[test]
    fn defaults() {
        let settings = ConfigFile::default().resolve(None, None).unwrap();
        assert_eq!(settings, Settings::default());
    }

    #[test]
    fn file_values_apply() {
        let file: ConfigFile = serde_json::from_str(
            r#"{"relevance_days_1":1,"relevance_days_2":2,"relevance_days_3":3,"timezone":"Europe/Stockholm","cors_allowed_origins":["http://team.lan"]}"#,
        )
        .unwrap();
        let settings = file.resolve(None, None).unwrap();
        assert_eq!(settings.policy.window_days(Priority::HIGH), 3);
        assert_eq!(settings.calendar.timezone, chrono_tz::Europe::Stockholm);
        assert_eq!(
            settings.cors_allowed_origins,
            vec!["http://team.lan".to_string()]
        );
    }

    #[test]
    fn environment_wins_for_timezone() {
        let file = ConfigFile {
            timezone: Some("Europe/Stockholm".into()),
            ..Default::default()
        };
        let settings = file.resolve(Some("Asia/Tokyo".into()), None).unwrap();
        assert_eq!(settings.calendar.timezone, chrono_tz::Asia::Tokyo);
        assert!(matches!(
            file.resolve(Some("Mars/Olympus".into()), None),
            Err(ConfigError::Timezone(_))
        ));
    }

    #[test]
    fn auth_toggle() {
        let file = ConfigFile::default();
        assert_eq!(
            file.resolve(None, Some("s3cret".into()))
                .unwrap()
                .auth_token
                .as_deref(),
            Some("s3cret")
        );
        let off = ConfigFile {
            auth_enabled: Some(false),
            ..Default::default()
        };
        assert_eq!(
            off.resolve(None, Some("s3cret".into())).unwrap().auth_token,
            None
        );
        let on = ConfigFile {
            auth_enabled: Some(true),
            ..Default::default()
        };
        assert!(matches!(
            on.resolve(None, None),
            Err(ConfigError::MissingToken)
        ));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"relevance_days":[1,2,3]}"#).is_err());
        let flat: ConfigFile = serde_json::from_str(r#"{"relevance_days_1":9}"#).unwrap();
        assert!(matches!(
            flat.resolve(None, None),
            Err(ConfigError::Policy(_))
        ));
    }
}
