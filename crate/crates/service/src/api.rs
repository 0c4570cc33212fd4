//! HTTP/JSON routes.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{FromRequestParts, Path, Query, State};
use axum::http::request::Parts;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use folgrade::{grade, grade_with, parse, Exercise, GraderConfig, Signature, Submission, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;
use tokio::sync::Semaphore;

use crate::auth::{Principal, TokenTable};
use crate::records::{ExerciseRecord, ExerciseView, SubmissionRecord, VerdictDoc, ALL_COHORTS};
use crate::store::{Store, StoreError, SubmissionFilter};

pub const PAGE_SIZE: usize = 10;
pub const MAX_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const MAX_SUBMISSION_LEN: usize = 4096;

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub tokens: Arc<TokenTable>,
    pub permits: Arc<Semaphore>,
    pub default_time_limit: Duration,
}

impl AppState {
    pub fn new(store: Store, tokens: TokenTable, workers: usize, default_time_limit: Duration) -> Self {
        AppState {
            store: Arc::new(store),
            tokens: Arc::new(tokens),
            permits: Arc::new(Semaphore::new(workers)),
            default_time_limit,
        }
    }
}

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("missing or unknown bearer token")]
    AuthFailure,
    #[error("this operation needs an instructor token")]
    Forbidden,
    #[error("no exercise with id {0}")]
    UnknownExercise(String),
    #[error("exercise {0} already exists")]
    Conflict(String),
    #[error("the exercise is not valid")]
    ValidationFailure(BTreeMap<String, String>),
    #[error("all grading workers are busy; try again shortly")]
    Overloaded,
    #[error("{0}")]
    BadRequest(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ApiError {
    fn kind(&self) -> &'static str {
        match self {
            ApiError::AuthFailure => "AuthFailure",
            ApiError::Forbidden => "Forbidden",
            ApiError::UnknownExercise(_) => "UnknownExercise",
            ApiError::Conflict(_) => "Conflict",
            ApiError::ValidationFailure(_) => "ValidationFailure",
            ApiError::Overloaded => "Overloaded",
            ApiError::BadRequest(_) => "BadRequest",
            ApiError::Internal(_) => "Internal",
        }
    }

    fn status(&self) -> StatusCode {
        match self {
            ApiError::AuthFailure => StatusCode::UNAUTHORIZED,
            ApiError::Forbidden => StatusCode::FORBIDDEN,
            ApiError::UnknownExercise(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict(_) => StatusCode::CONFLICT,
            ApiError::ValidationFailure(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Overloaded => StatusCode::SERVICE_UNAVAILABLE,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Duplicate(id) => ApiError::Conflict(id),
            StoreError::NotFound(id) => ApiError::UnknownExercise(id),
            other => ApiError::Internal(other.to_string()),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if let ApiError::Internal(msg) = &self {
            tracing::error!("{msg}");
        }
        let mut body = json!({ "error": self.kind(), "message": self.to_string() });
        if let ApiError::ValidationFailure(fields) = &self {
            body["fields"] = json!(fields);
        }
        let mut resp = (self.status(), Json(body)).into_response();
        if matches!(self, ApiError::Overloaded) {
            resp.headers_mut().insert(header::RETRY_AFTER, HeaderValue::from_static("1"));
        }
        if matches!(self, ApiError::AuthFailure) {
            resp.headers_mut().insert(header::WWW_AUTHENTICATE, HeaderValue::from_static("Bearer"));
        }
        resp
    }
}

impl FromRequestParts<AppState> for Principal {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, Self::Rejection> {
        let header = parts.headers.get(header::AUTHORIZATION).and_then(|v| v.to_str().ok());
        state.tokens.authenticate(header).cloned().ok_or(ApiError::AuthFailure)
    }
}

fn require_instructor(who: &Principal) -> Result<(), ApiError> {
    if who.is_instructor() {
        Ok(())
    } else {
        Err(ApiError::Forbidden)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/exercises", get(list_exercises).post(create_exercise))
        .route(
            "/api/exercises/{id}",
            get(get_exercise).put(update_exercise).delete(delete_exercise),
        )
        .route("/api/exercises/{id}/submissions", axum::routing::post(submit))
        .route("/api/submissions", get(list_submissions))
        .with_state(state)
}

async fn health(State(state): State<AppState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "exercises": state.store.exercises().len(),
        "submissions": state.store.submission_count(),
        "idleWorkers": state.permits.available_permits(),
    }))
}

async fn list_exercises(State(state): State<AppState>, who: Principal) -> Json<Vec<ExerciseView>> {
    Json(
        state
            .store
            .exercises()
            .iter()
            .filter(|r| r.available_to(&who))
            .map(|r| r.view_for(&who))
            .collect(),
    )
}

/// Unavailable exercises look exactly like missing ones.
fn available(state: &AppState, id: &str, who: &Principal) -> Result<ExerciseRecord, ApiError> {
    state
        .store
        .exercise(id)
        .filter(|r| r.available_to(who))
        .ok_or_else(|| ApiError::UnknownExercise(id.to_string()))
}

async fn get_exercise(
    State(state): State<AppState>,
    who: Principal,
    Path(id): Path<String>,
) -> Result<Json<ExerciseView>, ApiError> {
    Ok(Json(available(&state, &id, &who)?.view_for(&who)))
}

#[derive(Deserialize)]
struct SubmitBody {
    text: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SubmitResponse {
    submission_id: u64,
    #[serde(flatten)]
    verdict: VerdictDoc,
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// Runs blocking work holding one grading permit, or refuses at once.
async fn with_worker<T: Send + 'static>(
    state: &AppState,
    work: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    let permit = state.permits.clone().try_acquire_owned().map_err(|_| ApiError::Overloaded)?;
    tokio::task::spawn_blocking(move || {
        let _permit = permit;
        work()
    })
    .await
    .map_err(|e| ApiError::Internal(e.to_string()))
}

async fn submit(
    State(state): State<AppState>,
    who: Principal,
    Path(id): Path<String>,
    body: Result<Json<SubmitBody>, JsonRejection>,
) -> Result<Json<SubmitResponse>, ApiError> {
    let record = available(&state, &id, &who)?;
    let Json(body) = body?;
    if body.text.len() > MAX_SUBMISSION_LEN {
        return Err(ApiError::BadRequest(format!(
            "submissions are limited to {MAX_SUBMISSION_LEN} bytes"
        )));
    }
    let submission = Submission {
        exercise_id: id,
        student_id: who.user.clone(),
        text: body.text,
        submitted_at: now_ms(),
    };
    let store = state.store.clone();
    let saved = with_worker(&state, move || {
        let started = Instant::now();
        let verdict = grade(&record.exercise, &submission);
        let elapsed = started.elapsed().as_millis() as u64;
        let doc = VerdictDoc::new(&verdict, &record.exercise);
        store.append_submission(submission, doc, elapsed)
    })
    .await??;
    tracing::info!(
        exercise = %saved.submission.exercise_id,
        student = %saved.submission.student_id,
        status = %saved.verdict.status,
        ms = saved.grading_duration_ms,
        "graded submission {}",
        saved.id
    );
    Ok(Json(SubmitResponse {
        submission_id: saved.id,
        verdict: saved.verdict,
    }))
}

/// Exercise fields as sent by instructors. Everything is optional so that
/// each problem can be reported against its own field.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExerciseInput {
    pub id: Option<String>,
    pub prompt: Option<String>,
    pub signature: Option<Value>,
    pub model_answer: Option<String>,
    pub time_limit_ms: Option<i64>,
    pub symbol_glossary: Option<BTreeMap<String, String>>,
    pub assigned_to: Option<String>,
    pub visible: Option<bool>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

/// Field-level checks short of the smoke grade.
pub fn validate(input: ExerciseInput, created_by: &str, default_limit: Duration) -> Result<ExerciseRecord, BTreeMap<String, String>> {
    let mut errors = BTreeMap::new();
    let id = input.id.unwrap_or_default();
    if !valid_id(&id) {
        errors.insert("id".into(), "use 1 to 64 letters, digits, '-' or '_'".into());
    }
    let signature = match input.signature.map(serde_json::from_value::<Signature>) {
        None => {
            errors.insert("signature".into(), "required".into());
            None
        }
        Some(Err(e)) => {
            errors.insert("signature".into(), e.to_string());
            None
        }
        Some(Ok(sig)) => match sig.validate() {
            Ok(()) => Some(sig),
            Err(e) => {
                errors.insert("signature".into(), e.to_string());
                None
            }
        },
    };
    let model_text = input.model_answer.unwrap_or_default();
    let model = match &signature {
        _ if model_text.trim().is_empty() => {
            errors.insert("modelAnswer".into(), "required".into());
            None
        }
        Some(sig) => match parse(&model_text, sig) {
            Ok(f) => Some(f),
            Err(e) => {
                errors.insert("modelAnswer".into(), e.to_string());
                None
            }
        },
        None => None,
    };
    let limit = match input.time_limit_ms {
        None => Some(default_limit),
        Some(ms) if ms <= 0 => {
            errors.insert("timeLimitMs".into(), "must be positive".into());
            None
        }
        Some(ms) if Duration::from_millis(ms as u64) > MAX_TIME_LIMIT => {
            errors.insert("timeLimitMs".into(), format!("must be at most {}", MAX_TIME_LIMIT.as_millis()));
            None
        }
        Some(ms) => Some(Duration::from_millis(ms as u64)),
    };
    let assigned_to = input.assigned_to.unwrap_or_else(|| ALL_COHORTS.to_string());
    if assigned_to.trim().is_empty() {
        errors.insert("assignedTo".into(), "must not be empty".into());
    }
    let (Some(signature), Some(model), Some(limit)) = (signature, model, limit) else {
        return Err(errors);
    };
    if !errors.is_empty() {
        return Err(errors);
    }
    let exercise = Exercise {
        id,
        prompt: input.prompt.unwrap_or_default(),
        signature,
        model_answer: model,
        time_limit: limit,
        symbol_glossary: input.symbol_glossary.unwrap_or_default(),
    };
    Ok(ExerciseRecord {
        exercise,
        created_by: created_by.to_string(),
        assigned_to,
        visible: input.visible.unwrap_or(true),
    })
}

/// The model answer must grade Correct against itself within its own limit.
async fn smoke_grade(state: &AppState, record: &ExerciseRecord) -> Result<(), ApiError> {
    let ex = record.exercise.clone();
    let verdict = with_worker(state, move || {
        let text = ex.model_answer.to_string();
        grade_with(&ex, &text, &GraderConfig::default())
    })
    .await?;
    if verdict == Verdict::Correct {
        return Ok(());
    }
    let mut fields = BTreeMap::new();
    fields.insert(
        "modelAnswer".to_string(),
        format!(
            "could not be shown equivalent to itself within the time limit (result: {})",
            verdict.status()
        ),
    );
    Err(ApiError::ValidationFailure(fields))
}

async fn create_exercise(
    State(state): State<AppState>,
    who: Principal,
    body: Result<Json<ExerciseInput>, JsonRejection>,
) -> Result<(StatusCode, Json<ExerciseView>), ApiError> {
    require_instructor(&who)?;
    let Json(input) = body?;
    let record = validate(input, &who.user, state.default_time_limit).map_err(ApiError::ValidationFailure)?;
    if state.store.exercise(record.id()).is_some() {
        return Err(ApiError::Conflict(record.id().to_string()));
    }
    smoke_grade(&state, &record).await?;
    state.store.insert_exercise(record.clone())?;
    tracing::info!(exercise = %record.id(), by = %who.user, "created exercise");
    Ok((StatusCode::CREATED, Json(record.view_for(&who))))
}

async fn update_exercise(
    State(state): State<AppState>,
    who: Principal,
    Path(id): Path<String>,
    body: Result<Json<ExerciseInput>, JsonRejection>,
) -> Result<Json<ExerciseView>, ApiError> {
    require_instructor(&who)?;
    let Json(mut input) = body?;
    let existing = state.store.exercise(&id).ok_or_else(|| ApiError::UnknownExercise(id.clone()))?;
    match &input.id {
        Some(body_id) if body_id != &id => {
            let fields = BTreeMap::from([("id".to_string(), "does not match the exercise being updated".to_string())]);
            return Err(ApiError::ValidationFailure(fields));
        }
        _ => input.id = Some(id),
    }
    let record = validate(input, &existing.created_by, state.default_time_limit).map_err(ApiError::ValidationFailure)?;
    smoke_grade(&state, &record).await?;
    state.store.replace_exercise(record.clone())?;
    Ok(Json(record.view_for(&who)))
}

async fn delete_exercise(
    State(state): State<AppState>,
    who: Principal,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    require_instructor(&who)?;
    state.store.delete_exercise(&id)?;
    Ok(StatusCode::NO_CONTENT)
}

#[derive(Debug, Default, Deserialize)]
pub struct SubmissionQuery {
    pub student: Option<String>,
    pub exercise: Option<String>,
    pub verdict: Option<String>,
    pub page: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubmissionPage {
    pub page: usize,
    pub page_size: usize,
    pub total: usize,
    pub items: Vec<SubmissionRecord>,
}

/// Instructors may filter freely; students only ever see their own records.
async fn list_submissions(
    State(state): State<AppState>,
    who: Principal,
    query: Result<Query<SubmissionQuery>, QueryRejection>,
) -> Result<Json<SubmissionPage>, ApiError> {
    let Query(q) = query?;
    let page = q.page.unwrap_or(1);
    if page == 0 {
        return Err(ApiError::BadRequest("pages are numbered from 1".into()));
    }
    let status = q.verdict.map(|v| v.to_ascii_lowercase());
    if let Some(s) = &status {
        if !["correct", "incorrect", "timeout", "rejected"].contains(&s.as_str()) {
            return Err(ApiError::BadRequest(format!("unknown verdict {s:?}")));
        }
    }
    let student = if who.is_instructor() {
        q.student
    } else {
        match q.student {
            Some(s) if s != who.user => {
                return Ok(Json(SubmissionPage {
                    page,
                    page_size: PAGE_SIZE,
                    total: 0,
                    items: Vec::new(),
                }))
            }
            _ => Some(who.user.clone()),
        }
    };
    let all = state.store.submissions(&SubmissionFilter {
        student,
        exercise: q.exercise,
        status,
    });
    let total = all.len();
    let items = all.into_iter().skip((page - 1) * PAGE_SIZE).take(PAGE_SIZE).collect();
    Ok(Json(SubmissionPage {
        page,
        page_size: PAGE_SIZE,
        total,
        items,
    }))
}
