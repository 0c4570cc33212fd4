//! Congruence closure over ground terms, as used to close tableau branches
//! modulo equality.

use folgrade::congruence::CongruenceClosure;
use folgrade::Term;

fn main() {
    let a = Term::constant("A");
    let f = |t: Term| Term::app("F", vec![t]);
    let f3 = f(f(f(a.clone())));
    let f5 = f(f(f3.clone()));

    let mut cc = CongruenceClosure::new();
    cc.merge(&f3, &a);
    cc.merge(&f5, &a);
    println!("F(F(F(A))) = A, F(F(F(F(F(A))))) = A");
    println!("  F(A) = A follows: {}", cc.equivalent(&f(a.clone()), &a));

    let mut cc = CongruenceClosure::new();
    cc.merge(&Term::constant("C"), &Term::constant("Actor"));
    let occ = |t: Term| Term::app("Job", vec![t]);
    println!("C = Actor gives Job(C) = Job(Actor): {}", cc.equivalent(&occ(Term::constant("C")), &occ(Term::constant("Actor"))));
}
