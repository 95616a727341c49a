#![allow(dead_code)]

use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::http::{Request, StatusCode};
use axum::Router;
use happening::api::{self, AppState};
use happening::clock::FixedClock;
use happening::config::Settings;
use happening::store::EventStore;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub const NOW: &str = "2016-05-10T12:00:00Z";
pub const TODAY: &str = "2016-05-10";

pub struct TestApi {
    pub app: Router,
    pub state: Arc<AppState>,
    pub clock: Arc<FixedClock>,
    _dir: tempfile::TempDir,
}

pub struct Reply {
    pub status: StatusCode,
    pub body: Bytes,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| {
            panic!(
                "body is not JSON ({e}): {}",
                String::from_utf8_lossy(&self.body)
            )
        })
    }
}

impl TestApi {
    pub fn new() -> Self {
        Self::with_settings(Settings::default())
    }

    pub fn with_settings(settings: Settings) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let store = EventStore::open(dir.path()).unwrap();
        let clock = Arc::new(FixedClock::new(NOW.parse().unwrap()));
        let state = AppState::new(store, settings, clock.clone());
        let app = api::router(state.clone(), None);
        Self {
            app,
            state,
            clock,
            _dir: dir,
        }
    }

    pub async fn send(&self, request: Request<Body>) -> Reply {
        let response = self.app.clone().oneshot(request).await.unwrap();
        let status = response.status();
        let body = response.into_body().collect().await.unwrap().to_bytes();
        Reply { status, body }
    }

    pub async fn get(&self, uri: &str) -> Reply {
        self.send(Request::get(uri).body(Body::empty()).unwrap())
            .await
    }

    pub async fn post(&self, uri: &str, body: Value) -> Reply {
        self.post_raw(uri, body.to_string()).await
    }

    pub async fn post_raw(&self, uri: &str, body: String) -> Reply {
        self.send(
            Request::post(uri)
                .header("content-type", "application/json")
                .body(Body::from(body))
                .unwrap(),
        )
        .await
    }

    pub async fn delete(&self, uri: &str, member: Option<&str>) -> Reply {
        let mut request = Request::delete(uri);
        if let Some(member) = member {
            request = request.header("x-member-id", member);
        }
        self.send(request.body(Body::empty()).unwrap()).await
    }

    pub async fn add_member(&self, id: &str, name: &str) {
        let reply = self
            .post(
                "/api/members",
                serde_json::json!({"id": id, "display_name": name}),
            )
            .await;
        assert_eq!(reply.status, StatusCode::CREATED, "{}", reply.json());
    }

    pub async fn add_event(
        &self,
        author: &str,
        description: &str,
        priority: i64,
        date: &str,
    ) -> Value {
        let reply = self
            .post(
                "/api/events",
                serde_json::json!({
                    "author": author,
                    "description": description,
                    "priority": priority,
                    "event_date": date,
                }),
            )
            .await;
        assert_eq!(reply.status, StatusCode::CREATED, "{}", reply.json());
        reply.json()
    }
}

/// Checks the error body shape: exactly `status`, `code`, `message` and an
/// optional `details` list of `{field, rule, message}`.
pub fn assert_api_error(reply: &Reply, status: u16, code: &str) -> Value {
    assert_eq!(
        reply.status.as_u16(),
        status,
        "{}",
        String::from_utf8_lossy(&reply.body)
    );
    let body = reply.json();
    let object = body.as_object().expect("error body is an object");
    for key in object.keys() {
        assert!(
            ["status", "code", "message", "details"].contains(&key.as_str()),
            "unexpected key {key} in {body}"
        );
    }
    assert_eq!(object["status"], status);
    assert_eq!(object["code"], code);
    assert!(object["message"].as_str().is_some_and(|m| !m.is_empty()));
    if let Some(details) = object.get("details") {
        for item in details.as_array().expect("details is a list") {
            let item = item.as_object().unwrap();
            assert_eq!(item.len(), 3, "{item:?}");
            for key in ["field", "rule", "message"] {
                assert!(item[key].is_string(), "{item:?}");
            }
        }
    }
    body
}
