//! Grading submissions to the shipped exercises and rendering feedback.

use folgrade::{grade_with, render_feedback, Exercise, GraderConfig};

fn main() {
    let cases = [
        (
            include_str!("../data/exercises/surgeon.json"),
            "-(exists x (Occupation(x, Surgeon) & -Occupation(x, Doctor)))",
        ),
        (
            include_str!("../data/exercises/lawyer.json"),
            "exists x (Occupation(x, Lawyer) & -Customer(Joe, x))",
        ),
        (
            include_str!("../data/exercises/actor.json"),
            "Occupation(Joe, Actor) & exists x Occupation(Joe, x)",
        ),
        (include_str!("../data/exercises/surgeon.json"), "all x Occupation(x, Nurse)"),
    ];
    for (json, answer) in cases {
        let ex = Exercise::from_json(json).unwrap();
        println!("[{}] {answer}", ex.id);
        let verdict = grade_with(&ex, answer, &GraderConfig::default());
        println!("{}\n", render_feedback(&verdict, &ex));
        let plain = grade_with(&ex, answer, &GraderConfig::binary());
        println!("binary mode: {}\n", render_feedback(&plain, &ex).message);
    }
}
