//! Countermodels for the lawyer and actor mistakes, read off open tableau
//! branches and certified by evaluation.

use folgrade::{find_countermodel, parse, Formula, Signature, TableauBudget};

fn show(title: &str, sig: &Signature, model: &str, student: &str) {
    let f = Formula::iff(parse(model, sig).unwrap(), parse(student, sig).unwrap());
    println!("{title}: {f}");
    match find_countermodel(&f, sig, &TableauBudget::default()) {
        Some(cm) => {
            assert!(cm.certify());
            print!("{cm}");
        }
        None => println!("none found"),
    }
    println!();
}

fn main() {
    let lawyer = Signature::new()
        .with_constants(["Joe", "Lawyer"])
        .with_predicate("Occupation", 2)
        .with_predicate("Customer", 2);
    show(
        "lawyer",
        &lawyer,
        "-(exists x (Occupation(x, Lawyer) & Customer(Joe, x)))",
        "exists x (Occupation(x, Lawyer) & -Customer(Joe, x))",
    );

    let actor = Signature::new()
        .with_constants(["Actor", "Joe"])
        .with_predicate("Occupation", 2);
    show(
        "actor",
        &actor,
        "Occupation(Joe, Actor) & exists x (Occupation(Joe, x) & x != Actor)",
        "Occupation(Joe, Actor) & exists x Occupation(Joe, x)",
    );

    show("tautology", &lawyer, "Customer(Joe, Lawyer)", "--Customer(Joe, Lawyer)");
}
