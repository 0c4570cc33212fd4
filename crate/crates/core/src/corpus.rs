//! Corpus files: exercises with submissions and their expected verdicts.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::grader::{grade_with, Exercise, GraderConfig, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Correct,
    Incorrect,
    Timeout,
    Rejected,
}

impl Expected {
    pub fn as_str(self) -> &'static str {
        match self {
            Expected::Correct => "correct",
            Expected::Incorrect => "incorrect",
            Expected::Timeout => "timeout",
            Expected::Rejected => "rejected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSubmission {
    pub text: String,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub exercise: Exercise,
    #[serde(default)]
    pub submissions: Vec<CorpusSubmission>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFile {
    #[serde(default)]
    pub entries: Vec<CorpusEntry>,
}

impl CorpusFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.submissions.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusRow {
    pub exercise_id: String,
    pub text: String,
    pub expected: Expected,
    pub actual: &'static str,
    pub passed: bool,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub rows: Vec<CorpusRow>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed).count()
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "{}  {:<12} expected={:<9} actual={:<9} {:>6}ms  {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.exercise_id,
                r.expected.as_str(),
                r.actual,
                r.elapsed_ms,
                r.text
            )?;
        }
        write!(f, "{} rows, {} failed", self.rows.len(), self.failures())
    }
}

/// Grades every submission, `workers` at a time. Rows come back in file order.
pub fn run_corpus(corpus: &CorpusFile, config: &GraderConfig, workers: usize) -> CorpusReport {
    let jobs: Vec<(&Exercise, &CorpusSubmission)> = corpus
        .entries
        .iter()
        .flat_map(|e| e.submissions.iter().map(move |s| (&e.exercise, s)))
        .collect();
    let results: Mutex<Vec<Option<CorpusRow>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    thread::scope(|scope| {
        for _ in 0..workers.max(1).min(jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some((ex, sub)) = jobs.get(i) else { break };
                let started = Instant::now();
                let verdict = grade_with(ex, &sub.text, config);
                let row = CorpusRow {
                    exercise_id: ex.id.clone(),
                    text: sub.text.clone(),
                    expected: sub.expected,
                    actual: verdict.status(),
                    passed: matches_expected(&verdict, sub.expected),
                    elapsed_ms: started.elapsed().as_millis(),
                };
                results.lock().expect("results lock")[i] = Some(row);
            });
        }
    });
    CorpusReport {
        rows: results.into_inner().expect("results lock").into_iter().flatten().collect(),
    }
}

fn matches_expected(v: &Verdict, expected: Expected) -> bool {
    v.status() == expected.as_str()
}
