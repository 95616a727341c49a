use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use happening_core::{MemberError, SummaryError, Violation};
use serde::{Deserialize, Serialize};

use crate::store::StoreError;

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Vec<FieldViolation>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldViolation {
    pub field: String,
    pub rule: String,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status: status.as_u16(),
            code: code.into(),
            message: message.into(),
            details: None,
        }
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn validation(violations: &[Violation]) -> Self {
        let details = violations
            .iter()
            .map(|v| FieldViolation {
                field: v.field().into(),
                rule: v.rule().into(),
                message: v.to_string(),
            })
            .collect();
        Self {
            details: Some(details),
            ..Self::bad_request("validation_failed", "event input is invalid")
        }
    }

    pub fn member_validation(error: &MemberError) -> Self {
        Self {
            details: Some(vec![FieldViolation {
                field: error.field().into(),
                rule: error.rule().into(),
                message: error.to_string(),
            }]),
            ..Self::bad_request("validation_failed", "member input is invalid")
        }
    }

    pub fn unauthorized() -> Self {
        Self::new(
            StatusCode::UNAUTHORIZED,
            "unauthorized",
            "missing or wrong bearer token",
        )
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    pub fn method_not_allowed() -> Self {
        Self::new(
            StatusCode::METHOD_NOT_ALLOWED,
            "method_not_allowed",
            "method not allowed for this endpoint",
        )
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(error: StoreError) -> Self {
        let message = error.to_string();
        match error {
            StoreError::ValidationFailed(violations) => Self::validation(&violations),
            StoreError::UnknownAuthor(_) => {
                Self::new(StatusCode::NOT_FOUND, "unknown_author", message)
            }
            StoreError::DuplicateMember(_) => {
                Self::new(StatusCode::CONFLICT, "duplicate_member", message)
            }
            StoreError::NotFound(_) => Self::not_found(message),
            StoreError::Forbidden { .. } => Self::new(StatusCode::FORBIDDEN, "forbidden", message),
            StoreError::InvalidRange { .. } => Self::bad_request("invalid_range", message),
            StoreError::CorruptRecord { .. }
            | StoreError::Locked(_)
            | StoreError::NotEmpty
            | StoreError::Io(_) => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "storage_failure",
                message,
            ),
        }
    }
}

impl From<SummaryError> for ApiError {
    fn from(error: SummaryError) -> Self {
        let message = error.to_string();
        match error {
            SummaryError::UnknownMember(_) => {
                Self::new(StatusCode::NOT_FOUND, "unknown_member", message)
            }
            SummaryError::InvalidRange { .. } => Self::bad_request("invalid_range", message),
            SummaryError::UnknownAuthor { .. } => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "storage_failure",
                message,
            ),
        }
    }
}
