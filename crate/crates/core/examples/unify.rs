//! Most general unifiers, the occurs check, and clause subsumption.

use folgrade::normalize::{Atom, Clause, Literal};
use folgrade::unify::{subsumes, unify};
use folgrade::Term;

fn main() {
    let x = Term::var("x");
    let y = Term::var("y");
    let a = Atom::new("Occupation", vec![x.clone(), Term::constant("Lawyer")]);
    let b = Atom::new("Occupation", vec![Term::constant("Joe"), y.clone()]);
    let mgu = unify(&a, &b).unwrap();
    println!("unify({a}, {b}) = {mgu}");
    println!("  instance: {}", mgu.apply_atom(&a));

    let fx = Term::app("F", vec![x.clone()]);
    println!("unify(x, {fx}) = {:?}", unify(&x, &fx));
    println!("unify(Joe, Lawyer) = {:?}", unify(&Term::constant("Joe"), &Term::constant("Lawyer")));

    let general = Clause::new(vec![Literal::pos(Atom::new("P", vec![x]))]);
    let specific = Clause::new(vec![
        Literal::pos(Atom::new("P", vec![Term::constant("A")])),
        Literal::neg(Atom::new("Q", vec![y])),
    ]);
    println!("{general} subsumes {specific}: {}", subsumes(&general, &specific));
}
