//! Writes a few records, tears the last line as a crash would, and shows
//! that reopening replays everything up to the torn write.

use std::io::Write;
use std::time::Duration;

use folgrade::{grade_with, Exercise, GraderConfig, Signature, Submission};
use folgrade_service::store::SubmissionFilter;
use folgrade_service::{ExerciseRecord, Store, VerdictDoc};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("store.jsonl");
    let sig = Signature::new().with_predicate("P", 1).with_predicate("Q", 1);
    let ex = Exercise::new("pq", "Everything P is Q.", sig, "all x (P(x) -> Q(x))", Duration::from_secs(5)).unwrap();

    {
        let store = Store::open(&path).unwrap();
        store
            .insert_exercise(ExerciseRecord {
                exercise: ex.clone(),
                created_by: "kurt".into(),
                assigned_to: "all".into(),
                visible: true,
            })
            .unwrap();
        for text in ["all x (-Q(x) -> -P(x))", "all x (Q(x) -> P(x))"] {
            let verdict = grade_with(&ex, text, &GraderConfig::default());
            let sub = Submission {
                exercise_id: "pq".into(),
                student_id: "ada".into(),
                text: text.into(),
                submitted_at: 0,
            };
            let rec = store.append_submission(sub, VerdictDoc::new(&verdict, &ex), 0).unwrap();
            println!("recorded #{} {}: {}", rec.id, text, rec.verdict.status);
        }
    }

    let mut file = std::fs::OpenOptions::new().append(true).open(&path).unwrap();
    file.write_all(br#"{"schemaVersion":1,"op":"subm"#).unwrap();
    drop(file);
    println!("\n{}", std::fs::read_to_string(&path).unwrap());

    let store = Store::open(&path).unwrap();
    println!("\nafter reopen: {} exercise(s), {} submission(s)", store.exercises().len(), store.submission_count());
    for rec in store.submissions(&SubmissionFilter::default()) {
        println!("  #{} {} -> {}", rec.id, rec.submission.text, rec.verdict.message);
    }
}
