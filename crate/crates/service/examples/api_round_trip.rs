//! Drives the HTTP API in process: an instructor creates an exercise, a
//! student lists it, submits twice and reads back their history.

use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Method, Request};
use axum::Router;
use folgrade_service::{router, AppState, Store, TokenTable};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const TOKENS: &str = r#"
[[tokens]]
token = "t-kurt"
user = "kurt"
role = "instructor"

[[tokens]]
token = "t-ada"
user = "ada"
role = "student"
cohort = "logic-101"
"#;

async fn call(app: &Router, method: Method, uri: &str, token: &str, body: Option<Value>) -> Value {
    let req = Request::builder()
        .method(method.clone())
        .uri(uri)
        .header(header::AUTHORIZATION, format!("Bearer {token}"))
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.map(|b| Body::from(b.to_string())).unwrap_or_default())
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value: Value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    println!("{method} {uri} -> {status}\n{}\n", serde_json::to_string_pretty(&value).unwrap());
    value
}

#[tokio::main]
async fn main() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path().join("store.jsonl")).unwrap();
    let tokens = TokenTable::from_toml(TOKENS).unwrap();
    let app = router(AppState::new(store, tokens, 2, Duration::from_secs(5)));

    let exercise: Value = serde_json::from_str(include_str!("../../core/data/exercises/lawyer.json")).unwrap();
    call(&app, Method::POST, "/api/exercises", "t-kurt", Some(exercise)).await;
    call(&app, Method::GET, "/api/exercises", "t-ada", None).await;

    let submit = "/api/exercises/lawyer/submissions";
    let first = json!({"text": "exists x (Occupation(x, Lawyer) & -Customer(Joe, x))"});
    call(&app, Method::POST, submit, "t-ada", Some(first)).await;
    let second = json!({"text": "all x (Occupation(x, Lawyer) -> -Customer(Joe, x))"});
    call(&app, Method::POST, submit, "t-ada", Some(second)).await;

    call(&app, Method::GET, "/api/submissions?verdict=incorrect", "t-ada", None).await;
}
