//! Single-file, append-only JSON-lines store.
//!
//! Every change is one line carrying `schemaVersion`; the in-memory state
//! is rebuilt by replaying the file on open. Writes are flushed to disk
//! before they become visible.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use folgrade::Submission;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::records::{ExerciseRecord, SubmissionRecord, VerdictDoc};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("store i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {message}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: schema version {found} is newer than supported version {SCHEMA_VERSION}")]
    UnsupportedSchema { path: PathBuf, line: usize, found: u32 },
    #[error("exercise {0} already exists")]
    Duplicate(String),
    #[error("no exercise with id {0}")]
    NotFound(String),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Line {
    schema_version: u32,
    #[serde(flatten)]
    event: Event,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase")]
enum Event {
    PutExercise { record: ExerciseRecord },
    DeleteExercise { id: String },
    Submission { record: SubmissionRecord },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubmissionFilter {
    pub student: Option<String>,
    pub exercise: Option<String>,
    pub status: Option<String>,
}

impl SubmissionFilter {
    fn accepts(&self, r: &SubmissionRecord) -> bool {
        self.student.as_ref().is_none_or(|s| &r.submission.student_id == s)
            && self.exercise.as_ref().is_none_or(|e| &r.submission.exercise_id == e)
            && self.status.as_ref().is_none_or(|v| &r.verdict.status == v)
    }
}

#[derive(Default)]
struct State {
    exercises: BTreeMap<String, ExerciseRecord>,
    submissions: Vec<SubmissionRecord>,
}

impl State {
    fn apply(&mut self, event: Event) {
        match event {
            Event::PutExercise { record } => {
                self.exercises.insert(record.id().to_string(), record);
            }
            Event::DeleteExercise { id } => {
                self.exercises.remove(&id);
            }
            Event::Submission { record } => self.submissions.push(record),
        }
    }
}

struct Inner {
    file: File,
    state: State,
}

pub struct Store {
    path: PathBuf,
    inner: Mutex<Inner>,
}

impl Store {
    /// Opens or creates the store at `path` and replays it. A torn final
    /// line (no trailing newline) is dropped; any other bad line is an error.
    pub fn open(path: impl AsRef<Path>) -> Result<Store, StoreError> {
        let path = path.as_ref().to_path_buf();
        let mut state = State::default();
        let mut valid_len = 0u64;
        if path.exists() {
            let mut reader = BufReader::new(File::open(&path)?);
            let mut buf = String::new();
            let mut line_no = 0;
            loop {
                buf.clear();
                let n = reader.read_line(&mut buf)?;
                if n == 0 {
                    break;
                }
                line_no += 1;
                let complete = buf.ends_with('\n');
                let text = buf.trim();
                if text.is_empty() {
                    valid_len += n as u64;
                    continue;
                }
                match serde_json::from_str::<Line>(text) {
                    Ok(line) if line.schema_version > SCHEMA_VERSION => {
                        return Err(StoreError::UnsupportedSchema {
                            path,
                            line: line_no,
                            found: line.schema_version,
                        })
                    }
                    Ok(line) => state.apply(line.event),
                    Err(_) if !complete => break,
                    Err(e) => {
                        return Err(StoreError::Corrupt {
                            path,
                            line: line_no,
                            message: e.to_string(),
                        })
                    }
                }
                valid_len += n as u64;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        if file.metadata()?.len() > valid_len {
            file.set_len(valid_len)?;
        }
        Ok(Store {
            path,
            inner: Mutex::new(Inner { file, state }),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn write(inner: &mut Inner, event: Event) -> Result<(), StoreError> {
        let line = Line {
            schema_version: SCHEMA_VERSION,
            event,
        };
        let mut text = serde_json::to_string(&line).expect("store records serialize");
        text.push('\n');
        inner.file.write_all(text.as_bytes())?;
        inner.file.sync_data()?;
        inner.state.apply(line.event);
        Ok(())
    }

    /// All exercises in id order.
    pub fn exercises(&self) -> Vec<ExerciseRecord> {
        self.lock().state.exercises.values().cloned().collect()
    }

    pub fn exercise(&self, id: &str) -> Option<ExerciseRecord> {
        self.lock().state.exercises.get(id).cloned()
    }

    pub fn insert_exercise(&self, record: ExerciseRecord) -> Result<(), StoreError> {
        let mut inner = self.lock();
        if inner.state.exercises.contains_key(record.id()) {
            return Err(StoreError::Duplicate(record.id().to_string()));
        }
        Self::write(&mut inner, Event::PutExercise { record })
    }

    pub fn replace_exercise(&self, record: ExerciseRecord) -> Result<(), StoreError> {
        let mut inner = self.lock();
        if !inner.state.exercises.contains_key(record.id()) {
            return Err(StoreError::NotFound(record.id().to_string()));
        }
        Self::write(&mut inner, Event::PutExercise { record })
    }

    /// Removes an exercise; its submissions stay on record.
    pub fn delete_exercise(&self, id: &str) -> Result<(), StoreError> {
        let mut inner = self.lock();
        if !inner.state.exercises.contains_key(id) {
            return Err(StoreError::NotFound(id.to_string()));
        }
        Self::write(&mut inner, Event::DeleteExercise { id: id.to_string() })
    }

    /// Appends a graded submission and returns it with its assigned id.
    pub fn append_submission(
        &self,
        submission: Submission,
        verdict: VerdictDoc,
        grading_duration_ms: u64,
    ) -> Result<SubmissionRecord, StoreError> {
        let mut inner = self.lock();
        let record = SubmissionRecord {
            id: inner.state.submissions.len() as u64 + 1,
            submission,
            verdict,
            grading_duration_ms,
        };
        Self::write(&mut inner, Event::Submission { record: record.clone() })?;
        Ok(record)
    }

    /// Matching submissions in the order they were recorded.
    pub fn submissions(&self, filter: &SubmissionFilter) -> Vec<SubmissionRecord> {
        self.lock()
            .state
            .submissions
            .iter()
            .filter(|r| filter.accepts(r))
            .cloned()
            .collect()
    }

    pub fn submission_count(&self) -> usize {
        self.lock().state.submissions.len()
    }
}
