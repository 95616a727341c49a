//! Team member identities.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::borrow::Borrow;
use core::fmt;

use serde::{Deserialize, Serialize};

const MAX_ID_LEN: usize = 64;
const MAX_NAME_LEN: usize = 80;

/// URL-safe member token: `[A-Za-z0-9._~-]{1,64}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MemberId(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MemberError {
    #[error("member id must not be empty")]
    EmptyId,
    #[error("member id is longer than {MAX_ID_LEN} characters")]
    IdTooLong,
    #[error("member id may only contain letters, digits, '-', '_', '.' and '~'")]
    IdNotUrlSafe,
    #[error("display name must not be empty")]
    EmptyDisplayName,
    #[error("display name is longer than {MAX_NAME_LEN} characters")]
    DisplayNameTooLong,
    #[error("display name must not contain control characters")]
    DisplayNameControlCharacter,
}

impl MemberError {
    /// Stable rule name used in API error details.
    pub fn rule(&self) -> &'static str {
        match self {
            MemberError::EmptyId => "EmptyId",
            MemberError::IdTooLong => "IdTooLong",
            MemberError::IdNotUrlSafe => "IdNotUrlSafe",
            MemberError::EmptyDisplayName => "EmptyDisplayName",
            MemberError::DisplayNameTooLong => "DisplayNameTooLong",
            MemberError::DisplayNameControlCharacter => "DisplayNameControlCharacter",
        }
    }

    pub fn field(&self) -> &'static str {
        match self {
            MemberError::EmptyId | MemberError::IdTooLong | MemberError::IdNotUrlSafe => "id",
            _ => "display_name",
        }
    }
}

fn url_safe(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | '~')
}

impl MemberId {
    pub fn new(id: impl Into<String>) -> Result<Self, MemberError> {
        let id = id.into();
        if id.is_empty() {
            Err(MemberError::EmptyId)
        } else if id.chars().count() > MAX_ID_LEN {
            Err(MemberError::IdTooLong)
        } else if !id.chars().all(url_safe) {
            Err(MemberError::IdNotUrlSafe)
        } else {
            Ok(Self(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for MemberId {
    type Error = MemberError;

    fn try_from(id: String) -> Result<Self, Self::Error> {
        Self::new(id)
    }
}

impl From<MemberId> for String {
    fn from(id: MemberId) -> String {
        id.0
    }
}

impl Borrow<str> for MemberId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A team member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub id: MemberId,
    pub display_name: String,
}

impl Member {
    /// Builds a member, trimming the display name. Reports the first violated
    /// rule.
    pub fn new(id: impl Into<String>, display_name: &str) -> Result<Self, MemberError> {
        let id = MemberId::new(id)?;
        let display_name = validate_display_name(display_name)?;
        Ok(Self { id, display_name })
    }
}

fn validate_display_name(name: &str) -> Result<String, MemberError> {
    let name = name.trim();
    if name.is_empty() {
        Err(MemberError::EmptyDisplayName)
    } else if name.chars().count() > MAX_NAME_LEN {
        Err(MemberError::DisplayNameTooLong)
    } else if name.chars().any(char::is_control) {
        Err(MemberError::DisplayNameControlCharacter)
    } else {
        Ok(name.into())
    }
}

/// Lookup of members by id.
pub trait MemberDirectory {
    fn member(&self, id: &str) -> Option<&Member>;
}

impl MemberDirectory for BTreeMap<MemberId, Member> {
    fn member(&self, id: &str) -> Option<&Member> {
        self.get(id)
    }
}

impl MemberDirectory for [Member] {
    fn member(&self, id: &str) -> Option<&Member> {
        self.iter().find(|m| m.id.as_str() == id)
    }
}

impl<D: MemberDirectory + ?Sized> MemberDirectory for &D {
    fn member(&self, id: &str) -> Option<&Member> {
        (**self).member(id)
    }
}
