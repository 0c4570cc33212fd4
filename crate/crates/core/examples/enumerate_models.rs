//! Brute-force finite model search, the oracle behind the test suites.

use folgrade::models::enumerate_models;
use folgrade::{parse, parse_inferring, Formula, Signature};

fn main() {
    let sig = Signature::new()
        .with_constants(["Joe", "Lawyer"])
        .with_predicate("Occupation", 2)
        .with_predicate("Customer", 2);
    let a = parse("-(exists x (Occupation(x, Lawyer) & Customer(Joe, x)))", &sig).unwrap();
    let s = parse("exists x (Occupation(x, Lawyer) & -Customer(Joe, x))", &sig).unwrap();
    let negated = Formula::not(Formula::iff(a, s));
    match enumerate_models(&negated, &sig, 3).unwrap() {
        Some(m) => println!("model of -(A <-> S) with {} elements: {m:?}", m.domain_size),
        None => println!("no model up to 3 elements"),
    }

    let (bad, bad_sig) = parse_inferring("exists x x != x").unwrap();
    println!("exists x x != x: {:?}", enumerate_models(&bad, &bad_sig, 4).unwrap());
    let (p, p_sig) = parse_inferring("P(Joe)").unwrap();
    println!("P(Joe): {:?}", enumerate_models(&p, &p_sig, 1).unwrap().map(|m| m.domain_size));
}
