//! Resolution refutation of a negated biconditional, with the numbered
//! inference log, plus a satisfiable and a divergent clause set.

use std::time::Duration;

use folgrade::normalize::clausify;
use folgrade::resolution::{refute, Budget, ProofResult};
use folgrade::{parse, parse_inferring, Formula, Signature, StopToken};

fn main() {
    let sig = Signature::new()
        .with_constants(["Doctor", "Surgeon"])
        .with_predicate("Occupation", 2);
    let a = parse("all x (Occupation(x, Surgeon) -> Occupation(x, Doctor))", &sig).unwrap();
    let b = parse("-(exists x (Occupation(x, Surgeon) & -Occupation(x, Doctor)))", &sig).unwrap();
    let cs = clausify(&Formula::not(Formula::iff(a, b))).unwrap();
    let budget = Budget::new(StopToken::after(Duration::from_secs(5)));
    match refute(&cs, &budget) {
        ProofResult::Refuted(steps) => {
            println!("VALID ({} steps)", steps.len());
            for step in &steps {
                println!("  {step}");
            }
        }
        other => println!("unexpected: {other:?}"),
    }

    let (p, _) = parse_inferring("P(Joe)").unwrap();
    println!("-P(Joe): {:?}", refute(&clausify(&Formula::not(p)).unwrap(), &budget));

    let (diverge, _) = parse_inferring("P(A) & (all x (P(x) -> P(F(x)))) & -Q(A)").unwrap();
    let short = Budget::new(StopToken::after(Duration::from_millis(200)));
    println!("divergent: {:?}", refute(&clausify(&diverge).unwrap(), &short));
}
