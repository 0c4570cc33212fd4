//! Evaluating sentences in a finite interpretation: the two-lawyer world
//! where Joe retains one lawyer but not the other.

use folgrade::{evaluate_sentence, parse, Interpretation, Signature};

fn main() {
    let sig = Signature::new()
        .with_constants(["Joe", "Lawyer"])
        .with_predicate("Occupation", 2)
        .with_predicate("Customer", 2);
    // elements: 0 = Joe, 1 = Lawyer, 2 = B, 3 = C
    let mut world = Interpretation::trivial(&sig, 4);
    world.constants.insert("Joe".into(), 0);
    world.constants.insert("Lawyer".into(), 1);
    world.set_predicate("Occupation", &[2, 1], true);
    world.set_predicate("Occupation", &[3, 1], true);
    world.set_predicate("Customer", &[0, 3], true);

    let model = parse("-(exists x (Occupation(x, Lawyer) & Customer(Joe, x)))", &sig).unwrap();
    let student = parse("exists x (Occupation(x, Lawyer) & -Customer(Joe, x))", &sig).unwrap();
    println!("model answer:   {}", evaluate_sentence(&model, &world).unwrap());
    println!("student answer: {}", evaluate_sentence(&student, &world).unwrap());
    println!("Joe = Joe:      {}", evaluate_sentence(&parse("Joe = Joe", &sig).unwrap(), &world).unwrap());
}
