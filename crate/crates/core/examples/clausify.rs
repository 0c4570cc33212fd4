//! The clausal pipeline: negation normal form, Skolemization, clauses, and
//! the equality axioms added when `=` occurs.

use folgrade::normalize::{clausify, equality_axioms, skolemize, to_nnf};
use folgrade::{parse, Formula, Signature};

fn main() {
    let sig = Signature::new()
        .with_constants(["Actor", "Joe"])
        .with_predicate("Occupation", 2);
    let model = parse("Occupation(Joe, Actor) & exists x (Occupation(Joe, x) & x != Actor)", &sig).unwrap();
    let student = parse("Occupation(Joe, Actor) & exists x Occupation(Joe, x)", &sig).unwrap();
    let goal = Formula::not(Formula::iff(model, student));

    let nnf = to_nnf(&goal);
    println!("nnf:        {nnf}");
    println!("skolemized: {}", skolemize(&nnf));
    let cs = clausify(&goal).unwrap();
    println!("clauses ({}):\n{cs}", cs.len());
    println!("equality axioms:\n{}", equality_axioms(&cs.signature()));
}
