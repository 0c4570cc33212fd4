//! A submission whose difference from the model answer only shows in
//! infinite structures: neither search can settle it, so grading stops at
//! the time limit.

use std::time::{Duration, Instant};

use folgrade::grader::{grade_with, Exercise, GraderConfig};
use folgrade::render_feedback;

const ADVERSARIAL: &str = "(exists x P(x)) | ((all x -L(x, x)) \
    & (all x all y all z (L(x, y) & L(y, z) -> L(x, z))) \
    & (all x exists y L(x, y)))";

fn main() {
    let secs: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let ex = Exercise::from_json(include_str!("../data/exercises/chain.json"))
        .expect("exercise")
        .with_time_limit(Duration::from_secs(secs));
    let started = Instant::now();
    let verdict = grade_with(&ex, ADVERSARIAL, &GraderConfig::default());
    println!("{} after {:?}", verdict.status(), started.elapsed());
    println!("{}", render_feedback(&verdict, &ex));
}
