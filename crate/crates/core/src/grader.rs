//! Grading a submission against an exercise's model answer.
//!
//! The submission is parsed against the exercise signature, then two
//! searches race under the exercise time limit: a resolution refutation of
//! `-(A <-> B)`, which proves the answers equivalent, and a countermodel
//! search on `A <-> B`, which proves them different.

use std::collections::BTreeMap;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::countermodel::{find_countermodel, Countermodel};
use crate::models::DEFAULT_ENUMERATION_CAP;
use crate::normalize::clausify;
use crate::parser::{parse, ParseError};
use crate::resolution::{refute, Budget, ExceededReason, ProofResult, DEFAULT_MAX_CLAUSES};
use crate::stop::StopToken;
use crate::syntax::{Formula, Signature, SignatureError};
use crate::tableau::{TableauBudget, DEFAULT_MAX_STEPS};

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(5);

pub const TIMEOUT_MESSAGE: &str = "The time limit for checking your answer has been exceeded. \
Please revise your solution or talk to an instructor.";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExerciseError {
    #[error("invalid signature: {0}")]
    Signature(#[from] SignatureError),
    #[error("invalid model answer: {0}")]
    ModelAnswer(#[from] ParseError),
    #[error("time limit must be positive")]
    ZeroTimeLimit,
    #[error("exercise id must not be empty")]
    EmptyId,
}

/// An authored exercise. Serialized with the model answer as formula text
/// and the time limit in milliseconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExerciseDoc", into = "ExerciseDoc")]
pub struct Exercise {
    pub id: String,
    pub prompt: String,
    pub signature: Signature,
    pub model_answer: Formula,
    pub time_limit: Duration,
    /// English reading of symbols. Predicate entries may use `{1}`, `{2}`, ...
    /// for their arguments, e.g. `"{1} works as a {2}"`.
    pub symbol_glossary: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExerciseDoc {
    pub id: String,
    #[serde(default)]
    pub prompt: String,
    pub signature: Signature,
    pub model_answer: String,
    #[serde(default = "default_time_limit_ms")]
    pub time_limit_ms: u64,
    #[serde(default)]
    pub symbol_glossary: BTreeMap<String, String>,
}

fn default_time_limit_ms() -> u64 {
    DEFAULT_TIME_LIMIT.as_millis() as u64
}

impl TryFrom<ExerciseDoc> for Exercise {
    type Error = ExerciseError;

    fn try_from(doc: ExerciseDoc) -> Result<Self, Self::Error> {
        Exercise::new(
            &doc.id,
            &doc.prompt,
            doc.signature,
            &doc.model_answer,
            Duration::from_millis(doc.time_limit_ms),
        )
        .map(|ex| ex.with_glossary(doc.symbol_glossary))
    }
}

impl From<Exercise> for ExerciseDoc {
    fn from(ex: Exercise) -> Self {
        ExerciseDoc {
            model_answer: ex.model_answer.to_string(),
            time_limit_ms: ex.time_limit.as_millis() as u64,
            id: ex.id,
            prompt: ex.prompt,
            signature: ex.signature,
            symbol_glossary: ex.symbol_glossary,
        }
    }
}

impl Exercise {
    pub fn new(
        id: &str,
        prompt: &str,
        signature: Signature,
        model_answer: &str,
        time_limit: Duration,
    ) -> Result<Self, ExerciseError> {
        if id.trim().is_empty() {
            return Err(ExerciseError::EmptyId);
        }
        if time_limit.is_zero() {
            return Err(ExerciseError::ZeroTimeLimit);
        }
        signature.validate()?;
        let model_answer = parse(model_answer, &signature)?;
        Ok(Exercise {
            id: id.to_string(),
            prompt: prompt.to_string(),
            signature,
            model_answer,
            time_limit,
            symbol_glossary: BTreeMap::new(),
        })
    }

    pub fn with_glossary(mut self, glossary: BTreeMap<String, String>) -> Self {
        self.symbol_glossary = glossary;
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = limit;
        self
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("exercise serializes")
    }
}

/// A student attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Submission {
    pub exercise_id: String,
    pub student_id: String,
    pub text: String,
    /// Milliseconds since the Unix epoch.
    pub submitted_at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Correct,
    Incorrect(Option<Countermodel>),
    TimeLimitExceeded(String),
    Rejected(ParseError),
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Correct => "correct",
            Verdict::Incorrect(_) => "incorrect",
            Verdict::TimeLimitExceeded(_) => "timeout",
            Verdict::Rejected(_) => "rejected",
        }
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Incorrect(cm) => cm.as_ref(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraderConfig {
    /// Run only the prover: verdicts are plain correct/incorrect/timeout.
    pub binary: bool,
    pub max_clauses: usize,
    pub max_gamma_instantiations: usize,
    pub max_domain_size: usize,
    pub enumeration_cap: u128,
    pub max_tableau_steps: usize,
}

impl Default for GraderConfig {
    fn default() -> Self {
        GraderConfig {
            binary: false,
            max_clauses: DEFAULT_MAX_CLAUSES,
            max_gamma_instantiations: 4,
            max_domain_size: 4,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            max_tableau_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl GraderConfig {
    pub fn binary() -> Self {
        GraderConfig {
            binary: true,
            ..Self::default()
        }
    }
}

enum Report {
    Proof(ProofResult),
    Model(Option<Countermodel>),
}

pub fn grade(ex: &Exercise, sub: &Submission) -> Verdict {
    grade_with(ex, &sub.text, &GraderConfig::default())
}

/// Grades `text` against `ex`. Always returns within the exercise time
/// limit plus a small scheduling margin: searches still running at the
/// deadline are cancelled and left to wind down on their own.
pub fn grade_with(ex: &Exercise, text: &str, config: &GraderConfig) -> Verdict {
    let stop = StopToken::at(Instant::now() + ex.time_limit);
    let student = match parse(text, &ex.signature) {
        Ok(f) => f,
        Err(e) => return Verdict::Rejected(e),
    };
    let model = ex.model_answer.clone();
    let (tx, rx) = mpsc::channel();

    {
        let tx = tx.clone();
        let stop = stop.clone();
        let goal = Formula::not(Formula::iff(model.clone(), student.clone()));
        let budget = Budget::new(stop).with_max_clauses(config.max_clauses);
        thread::spawn(move || {
            let result = match clausify(&goal) {
                Ok(cs) => refute(&cs, &budget),
                Err(_) => ProofResult::BudgetExceeded(ExceededReason::ClauseLimit),
            };
            let _ = tx.send(Report::Proof(result));
        });
    }
    if !config.binary {
        let tx = tx.clone();
        let budget = TableauBudget {
            stop: stop.clone(),
            max_gamma_instantiations: config.max_gamma_instantiations,
            max_domain_size: config.max_domain_size,
            enumeration_cap: config.enumeration_cap,
            max_steps: config.max_tableau_steps,
        };
        // the first branch explored is "student true, model false"
        let target = Formula::iff(model, student);
        let sig = ex.signature.clone();
        thread::spawn(move || {
            let _ = tx.send(Report::Model(find_countermodel(&target, &sig, &budget)));
        });
    }
    drop(tx);

    let deadline = stop.deadline().expect("grading deadline");
    let mut saturated = false;
    let mut proof_done = false;
    let mut model_done = config.binary;
    let verdict = loop {
        let remaining = deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(remaining) {
            Ok(Report::Proof(ProofResult::Refuted(_))) => break Verdict::Correct,
            Ok(Report::Proof(ProofResult::Saturated)) => {
                saturated = true;
                proof_done = true;
            }
            Ok(Report::Proof(ProofResult::BudgetExceeded(_))) => proof_done = true,
            Ok(Report::Model(Some(cm))) => break Verdict::Incorrect(Some(cm)),
            Ok(Report::Model(None)) => model_done = true,
            Err(_) => break timeout_or(saturated),
        }
        if proof_done && model_done {
            break timeout_or(saturated);
        }
    };
    stop.cancel();
    verdict
}

fn timeout_or(saturated: bool) -> Verdict {
    if saturated {
        Verdict::Incorrect(None)
    } else {
        Verdict::TimeLimitExceeded(TIMEOUT_MESSAGE.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surgeon() -> Exercise {
        let sig = Signature::new()
            .with_constants(["Doctor", "Surgeon"])
            .with_predicate("Occupation", 2);
        Exercise::new(
            "surgeon",
            "All surgeons are doctors.",
            sig,
            "all x (Occupation(x,Surgeon) -> Occupation(x,Doctor))",
            DEFAULT_TIME_LIMIT,
        )
        .unwrap()
    }

    #[test]
    fn alternative_form_is_correct() {
        let v = grade_with(
            &surgeon(),
            "-(exists x (Occupation(x,Surgeon) & -Occupation(x,Doctor)))",
            &GraderConfig::default(),
        );
        assert_eq!(v, Verdict::Correct);
    }

    #[test]
    fn converse_is_incorrect_with_countermodel() {
        let v = grade_with(
            &surgeon(),
            "all x (Occupation(x,Doctor) -> Occupation(x,Surgeon))",
            &GraderConfig::default(),
        );
        assert!(v.countermodel().unwrap().certify());
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        let v = grade_with(&surgeon(), "all x Occupation(x, Nurse)", &GraderConfig::default());
        assert!(matches!(v, Verdict::Rejected(ParseError::UnknownSymbol { ref name, .. }) if name == "Nurse"));
    }

    #[test]
    fn binary_mode_has_no_countermodel() {
        let v = grade_with(&surgeon(), "all x Occupation(x,Doctor)", &GraderConfig::binary());
        assert_eq!(v, Verdict::Incorrect(None));
    }

    #[test]
    fn exercise_json_round_trip() {
        let ex = surgeon();
        let back = Exercise::from_json(&ex.to_json()).unwrap();
        assert_eq!(back, ex);
    }

    #[test]
    fn exercise_validation() {
        let sig = Signature::new().with_predicate("P", 1);
        assert_eq!(
            Exercise::new("x", "", sig.clone(), "all x P(x)", Duration::ZERO),
            Err(ExerciseError::ZeroTimeLimit)
        );
        assert!(matches!(
            Exercise::new("x", "", sig, "all x Q(x)", DEFAULT_TIME_LIMIT),
            Err(ExerciseError::ModelAnswer(ParseError::UnknownSymbol { .. }))
        ));
        let json = r#"{"id":"t","signature":{"predicates":{"P":1}},"modelAnswer":"exists x P(x)"}"#;
        assert_eq!(Exercise::from_json(json).unwrap().time_limit, DEFAULT_TIME_LIMIT);
    }
}
