//! HTTP/JSON interface.
//!
//! | method | path                | |
//! |--------|---------------------|-|
//! | GET    | `/api/health`       | liveness and live event count, never behind auth |
//! | GET    | `/api/members`      | members sorted by id |
//! | POST   | `/api/members`      | `{id, display_name}` |
//! | POST   | `/api/events`       | `{author, description, priority, event_date}` |
//! | DELETE | `/api/events/{id}`  | requester in `X-Member-Id` |
//! | GET    | `/api/summary`      | `from`, `to`, `hide_stale` (default true), `as_of` (default today) |
//! | GET    | `/api/catchup`      | `member`, `since`, `as_of` (default today), `hide_stale` (default true) |
//!
//! Mutations take the store's write lock, so there is a single writer at a
//! time; reads share the read lock and always see whole writes.

mod error;

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path as UrlPath, Query, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{any, get, post, MethodRouter};
use axum::{Json, Router};
use chrono::NaiveDate;
use happening_core::{catchup, parse_date, summarize, EventId, Member, Period, SummaryQuery};
use serde::Deserialize;
use tokio::sync::RwLock;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use tower_http::services::{ServeDir, ServeFile};

use crate::clock::Clock;
use crate::config::Settings;
use crate::store::{EventStore, NewEvent};

pub use error::{ApiError, FieldViolation};

pub const MEMBER_HEADER: &str = "x-member-id";

pub struct AppState {
    pub store: RwLock<EventStore>,
    pub settings: Settings,
    pub clock: Arc<dyn Clock>,
}

impl AppState {
    pub fn new(store: EventStore, settings: Settings, clock: Arc<dyn Clock>) -> Arc<Self> {
        Arc::new(Self {
            store: RwLock::new(store),
            settings,
            clock,
        })
    }

    fn today(&self) -> NaiveDate {
        self.settings.calendar.today(self.clock.as_ref())
    }
}

type Shared = State<Arc<AppState>>;
type ApiResult = Result<Response, ApiError>;

/// The API routes plus, for every other path, the static UI from `ui_dir`
/// (or a placeholder page when no UI has been built).
pub fn router(state: Arc<AppState>, ui_dir: Option<&Path>) -> Router {
    let guarded = Router::new()
        .route(
            "/api/members",
            with_405(get(list_members).post(create_member)),
        )
        .route("/api/events", with_405(post(create_event)))
        .route(
            "/api/events/{id}",
            with_405(axum::routing::delete(delete_event)),
        )
        .route("/api/summary", with_405(get(get_summary)))
        .route("/api/catchup", with_405(get(get_catchup)))
        .route("/api/{*rest}", any(unknown_endpoint))
        .route("/api", any(unknown_endpoint))
        .route_layer(middleware::from_fn_with_state(state.clone(), require_token));

    let app = Router::new()
        .route("/api/health", with_405(get(health)))
        .merge(guarded)
        .with_state(state.clone());

    let app = match ui_dir {
        Some(dir) if dir.is_dir() => app
            .fallback_service(ServeDir::new(dir).fallback(ServeFile::new(dir.join("index.html")))),
        _ => app.fallback(placeholder_page),
    };
    app.layer(cors_layer(&state.settings.cors_allowed_origins))
}

fn with_405(route: MethodRouter<Arc<AppState>>) -> MethodRouter<Arc<AppState>> {
    route.fallback(|| async { ApiError::method_not_allowed() })
}

fn cors_layer(origins: &[String]) -> CorsLayer {
    let layer = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST, Method::DELETE, Method::OPTIONS])
        .allow_headers([
            header::CONTENT_TYPE,
            header::AUTHORIZATION,
            header::HeaderName::from_static(MEMBER_HEADER),
        ]);
    if origins.iter().any(|o| o == "*") {
        layer.allow_origin(Any)
    } else {
        let list: Vec<HeaderValue> = origins.iter().filter_map(|o| o.parse().ok()).collect();
        layer.allow_origin(AllowOrigin::list(list))
    }
}

async fn require_token(State(state): Shared, request: Request, next: Next) -> Response {
    if let Some(token) = &state.settings.auth_token {
        let presented = request
            .headers()
            .get(header::AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "));
        if presented != Some(token.as_str()) {
            return ApiError::unauthorized().into_response();
        }
    }
    next.run(request).await
}

async fn unknown_endpoint() -> ApiError {
    ApiError::not_found("no such endpoint")
}

async fn placeholder_page() -> Html<&'static str> {
    Html(
        "<!doctype html><title>happening</title>\
         <p>The web UI has not been built. The API is available under <code>/api</code>, \
         e.g. <a href=\"/api/health\">/api/health</a>.</p>",
    )
}

async fn health(State(state): Shared) -> Response {
    let events = state.store.read().await.event_count();
    Json(serde_json::json!({ "status": "ok", "events": events })).into_response()
}

async fn list_members(State(state): Shared) -> Response {
    let store = state.store.read().await;
    let members: Vec<&Member> = store.members().values().collect();
    Json(members).into_response()
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request("invalid_body", format!("request body: {e}")))
}

#[derive(Deserialize)]
struct MemberBody {
    id: String,
    display_name: String,
}

async fn create_member(State(state): Shared, body: Bytes) -> ApiResult {
    let body: MemberBody = parse_body(&body)?;
    let member =
        Member::new(body.id, &body.display_name).map_err(|e| ApiError::member_validation(&e))?;
    let member = state.store.write().await.add_member(member)?;
    Ok((StatusCode::CREATED, Json(member)).into_response())
}

#[derive(Deserialize)]
struct EventBody {
    author: String,
    description: String,
    priority: i64,
    event_date: String,
}

async fn create_event(State(state): Shared, body: Bytes) -> ApiResult {
    let body: EventBody = parse_body(&body)?;
    let today = state.today();
    let now = state.settings.calendar.now(state.clock.as_ref());
    let input = NewEvent {
        author: &body.author,
        description: &body.description,
        priority: body.priority,
        event_date: &body.event_date,
    };
    let event = state.store.write().await.append_event(&input, today, now)?;
    Ok((StatusCode::CREATED, Json(event)).into_response())
}

async fn delete_event(
    State(state): Shared,
    UrlPath(id): UrlPath<String>,
    headers: HeaderMap,
) -> ApiResult {
    let id: u64 = id.parse().map_err(|_| {
        ApiError::bad_request(
            "invalid_parameter",
            format!("event id {id:?} is not an integer"),
        )
    })?;
    let requester = headers
        .get(MEMBER_HEADER)
        .and_then(|v| v.to_str().ok())
        .filter(|v| !v.is_empty())
        .ok_or_else(|| {
            ApiError::bad_request("missing_parameter", "X-Member-Id header is required")
        })?;
    let now = state.settings.calendar.now(state.clock.as_ref());
    state
        .store
        .write()
        .await
        .delete_event(EventId(id), requester, now)?;
    Ok(StatusCode::NO_CONTENT.into_response())
}

struct Params(HashMap<String, String>);

impl Params {
    fn from_query(
        query: Result<Query<HashMap<String, String>>, QueryRejection>,
    ) -> Result<Self, ApiError> {
        query
            .map(|Query(map)| Params(map))
            .map_err(|e| ApiError::bad_request("invalid_parameter", e.body_text()))
    }

    fn required(&self, name: &str) -> Result<&str, ApiError> {
        self.0.get(name).map(String::as_str).ok_or_else(|| {
            ApiError::bad_request(
                "missing_parameter",
                format!("query parameter {name:?} is required"),
            )
        })
    }

    fn date(&self, name: &str) -> Result<Option<NaiveDate>, ApiError> {
        self.0
            .get(name)
            .map(|text| {
                parse_date(text).ok_or_else(|| {
                    ApiError::bad_request(
                        "invalid_date",
                        format!("{name}={text:?} is not a YYYY-MM-DD date"),
                    )
                })
            })
            .transpose()
    }

    fn required_date(&self, name: &str) -> Result<NaiveDate, ApiError> {
        self.required(name)?;
        Ok(self.date(name)?.expect("presence checked"))
    }

    fn flag(&self, name: &str, default: bool) -> Result<bool, ApiError> {
        match self.0.get(name).map(String::as_str) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(other) => Err(ApiError::bad_request(
                "invalid_parameter",
                format!("{name}={other:?} must be true or false"),
            )),
        }
    }
}

async fn get_summary(
    State(state): Shared,
    query: Result<Query<HashMap<String, String>>, QueryRejection>,
) -> ApiResult {
    let params = Params::from_query(query)?;
    let from = params.required_date("from")?;
    let to = params.required_date("to")?;
    let hide_stale = params.flag("hide_stale", true)?;
    let as_of = params.date("as_of")?.unwrap_or_else(|| state.today());
    let query = SummaryQuery {
        period: Period::new(from, to)?,
        hide_stale,
        as_of,
    };
    let store = state.store.read().await;
    let summary = summarize(
        store.events(),
        store.members(),
        &query,
        &state.settings.policy,
    )?;
    Ok(Json(summary).into_response())
}

async fn get_catchup(
    State(state): Shared,
    query: Result<Query<HashMap<String, String>>, QueryRejection>,
) -> ApiResult {
    let params = Params::from_query(query)?;
    let member = params.required("member")?.to_owned();
    let since = params.required_date("since")?;
    let as_of = params.date("as_of")?.unwrap_or_else(|| state.today());
    let hide_stale = params.flag("hide_stale", true)?;
    let store = state.store.read().await;
    let summary = catchup(
        store.events(),
        store.members(),
        &member,
        since,
        as_of,
        hide_stale,
        &state.settings.policy,
    )?;
    Ok(Json(summary).into_response())
}
