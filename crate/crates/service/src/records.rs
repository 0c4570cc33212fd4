//! Stored documents and their JSON shapes.

use std::collections::BTreeMap;

use folgrade::{render_feedback, Exercise, Signature, Submission, Verdict};
use serde::{Deserialize, Serialize};

use crate::auth::Principal;

/// Cohort tag that matches every student.
pub const ALL_COHORTS: &str = "all";

fn all_cohorts() -> String {
    ALL_COHORTS.to_string()
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExerciseRecord {
    #[serde(flatten)]
    pub exercise: Exercise,
    pub created_by: String,
    #[serde(default = "all_cohorts")]
    pub assigned_to: String,
    #[serde(default = "yes")]
    pub visible: bool,
}

impl ExerciseRecord {
    pub fn id(&self) -> &str {
        &self.exercise.id
    }

    /// Visible and assigned to the principal's cohort; instructors see everything.
    pub fn available_to(&self, who: &Principal) -> bool {
        who.is_instructor()
            || (self.visible
                && (self.assigned_to == ALL_COHORTS || who.cohort.as_deref() == Some(self.assigned_to.as_str())))
    }

    /// The JSON a principal may see. Students never receive the model answer.
    pub fn view_for(&self, who: &Principal) -> ExerciseView {
        let ex = &self.exercise;
        ExerciseView {
            id: ex.id.clone(),
            prompt: ex.prompt.clone(),
            signature: ex.signature.clone(),
            time_limit_ms: ex.time_limit.as_millis() as u64,
            symbol_glossary: ex.symbol_glossary.clone(),
            assigned_to: self.assigned_to.clone(),
            visible: self.visible,
            created_by: who.is_instructor().then(|| self.created_by.clone()),
            model_answer: who.is_instructor().then(|| ex.model_answer.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExerciseView {
    pub id: String,
    pub prompt: String,
    pub signature: Signature,
    pub time_limit_ms: u64,
    pub symbol_glossary: BTreeMap<String, String>,
    pub assigned_to: String,
    pub visible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_answer: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountermodelDoc {
    pub domain: Vec<String>,
    pub literals: Vec<String>,
}

/// A verdict as sent to clients and stored with each submission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDoc {
    /// `correct`, `incorrect`, `timeout` or `rejected`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<CountermodelDoc>,
    pub message: String,
    /// Narrative explanation of the countermodel, one sentence per entry.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    /// Rejection reason, e.g. `UnknownSymbol`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Character offset of a rejection in the submitted text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

impl VerdictDoc {
    pub fn new(v: &Verdict, ex: &Exercise) -> Self {
        let fb = render_feedback(v, ex);
        let (reason, position) = match v {
            Verdict::Rejected(e) => (Some(e.kind().to_string()), e.position()),
            _ => (None, None),
        };
        VerdictDoc {
            status: v.status().to_string(),
            countermodel: v.countermodel().map(|cm| CountermodelDoc {
                domain: cm.domain.clone(),
                literals: cm.literals.iter().map(|l| l.to_string()).collect(),
            }),
            message: fb.message,
            details: fb.details,
            reason,
            position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SubmissionRecord {
    pub id: u64,
    #[serde(flatten)]
    pub submission: Submission,
    pub verdict: VerdictDoc,
    pub grading_duration_ms: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auth::Role;
    use std::time::Duration;

    fn record() -> ExerciseRecord {
        let sig = Signature::new().with_constants(["Doctor", "Surgeon"]).with_predicate("Occupation", 2);
        let ex = Exercise::new(
            "surgeon",
            "All surgeons are doctors.",
            sig,
            "all x (Occupation(x, Surgeon) -> Occupation(x, Doctor))",
            Duration::from_secs(5),
        )
        .unwrap();
        ExerciseRecord {
            exercise: ex,
            created_by: "kurt".into(),
            assigned_to: "logic-101".into(),
            visible: true,
        }
    }

    fn student(cohort: &str) -> Principal {
        Principal {
            user: "ada".into(),
            role: Role::Student,
            cohort: Some(cohort.into()),
        }
    }

    #[test]
    fn record_json_round_trips_with_flat_exercise_fields() {
        let r = record();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["id"], "surgeon");
        assert_eq!(json["timeLimitMs"], 5000);
        assert_eq!(json["assignedTo"], "logic-101");
        let back: ExerciseRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn student_view_hides_model_answer() {
        let r = record();
        let view = serde_json::to_string(&r.view_for(&student("logic-101"))).unwrap();
        assert!(!view.contains("modelAnswer") && !view.contains("createdBy"), "{view}");
        let teacher = Principal {
            user: "kurt".into(),
            role: Role::Instructor,
            cohort: None,
        };
        assert!(serde_json::to_string(&r.view_for(&teacher)).unwrap().contains("modelAnswer"));
    }

    #[test]
    fn availability_follows_cohort_and_visibility() {
        let mut r = record();
        assert!(r.available_to(&student("logic-101")));
        assert!(!r.available_to(&student("logic-102")));
        r.assigned_to = ALL_COHORTS.into();
        assert!(r.available_to(&student("logic-102")));
        r.visible = false;
        assert!(!r.available_to(&student("logic-101")));
    }
}
