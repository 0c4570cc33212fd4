#![allow(dead_code)]

use std::path::PathBuf;
use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use folgrade_service::{router, AppState, Principal, Role, Store, TokenTable};
use http_body_util::BodyExt;
use serde_json::Value;
use tempfile::TempDir;
use tower::ServiceExt;

pub const KURT: &str = "t-kurt";
pub const ADA: &str = "t-ada";
pub const BOB: &str = "t-bob";

pub const SURGEON: &str = include_str!("../../../core/data/exercises/surgeon.json");
pub const LAWYER: &str = include_str!("../../../core/data/exercises/lawyer.json");
pub const ACTOR: &str = include_str!("../../../core/data/exercises/actor.json");

/// kurt teaches; ada is in logic-101, bob in logic-102.
pub fn tokens() -> TokenTable {
    let mut t = TokenTable::default();
    let p = |user: &str, role, cohort: Option<&str>| Principal {
        user: user.into(),
        role,
        cohort: cohort.map(String::from),
    };
    t.insert(KURT, p("kurt", Role::Instructor, None)).unwrap();
    t.insert(ADA, p("ada", Role::Student, Some("logic-101"))).unwrap();
    t.insert(BOB, p("bob", Role::Student, Some("logic-102"))).unwrap();
    t
}

pub struct Harness {
    pub dir: TempDir,
    pub app: Router,
    pub workers: usize,
}

impl Harness {
    pub fn new(workers: usize) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let app = Self::open(&dir.path().join("store.jsonl"), workers);
        Harness { dir, app, workers }
    }

    fn open(path: &PathBuf, workers: usize) -> Router {
        let store = Store::open(path).unwrap();
        router(AppState::new(store, tokens(), workers, Duration::from_secs(5)))
    }

    pub fn store_path(&self) -> PathBuf {
        self.dir.path().join("store.jsonl")
    }

    /// Drops the running app and replays the store from disk.
    pub fn restart(&mut self) {
        self.app = Router::new();
        self.app = Self::open(&self.store_path(), self.workers);
    }

    pub async fn call(&self, method: Method, uri: &str, token: Option<&str>, body: Option<Value>) -> Reply {
        call(&self.app, method, uri, token, body).await
    }
}

#[derive(Debug)]
pub struct Reply {
    pub status: StatusCode,
    pub text: String,
    pub json: Value,
}

pub async fn call(app: &Router, method: Method, uri: &str, token: Option<&str>, body: Option<Value>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header(header::AUTHORIZATION, format!("Bearer {t}"));
    }
    let req = match body {
        Some(v) => req
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(v.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    Reply { status, text, json }
}

/// Exercise JSON with an assignment added.
pub fn exercise_json(text: &str, assigned_to: &str, visible: bool) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["assignedTo"] = Value::from(assigned_to);
    v["visible"] = Value::from(visible);
    v
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// True when `body` carries the model answer in any spacing, or the field name.
pub fn leaks(body: &str, model_answers: &[String]) -> bool {
    let flat = squash(body);
    flat.contains("modelAnswer") || model_answers.iter().any(|m| flat.contains(&squash(m)))
}
