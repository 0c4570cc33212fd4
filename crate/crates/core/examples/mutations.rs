//! Mutates a model answer the way students tend to, then grades each
//! mutant and asks the finite-model oracle whether it really differs.

use folgrade::mutate::mutants;
use folgrade::oracle::check;
use folgrade::{Exercise, GraderConfig};

fn main() {
    let ex = Exercise::from_json(include_str!("../data/exercises/actor.json")).unwrap();
    println!("model answer: {}", ex.model_answer);
    for (kind, m) in mutants(&ex.model_answer) {
        let a = check(&ex, &m.to_string(), &GraderConfig::default(), 3).unwrap();
        let oracle = if a.oracle.is_conclusive() { "differs" } else { "no difference <= 3" };
        println!(
            "{:<18} {:<9} oracle: {:<18} agrees: {}  {m}",
            kind.name(),
            a.verdict.status(),
            oracle,
            a.agrees()
        );
    }
}
