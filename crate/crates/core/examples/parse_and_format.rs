//! Parsing formula text against a signature, printing it back, and the
//! rejection reasons a student sees.

use folgrade::{format, parse, Signature};

fn main() {
    let sig = Signature::new()
        .with_constants(["Doctor", "Surgeon"])
        .with_predicate("Occupation", 2);

    let f = parse("all x (Occupation(x,Surgeon) -> Occupation(x,Doctor))", &sig).unwrap();
    println!("parsed:   {f:?}");
    println!("printed:  {}", format(&f));
    assert_eq!(parse(&format(&f), &sig).unwrap(), f);

    for bad in [
        "all x Occupation(x, Nurse)",
        "Occupation(Joe)",
        "Occupation(x, Doctor)",
        "all x (Occupation(x, Surgeon) ∧ Occupation(x, Doctor))",
        "exists sk1 Occupation(sk1, Doctor)",
    ] {
        let err = parse(bad, &sig).unwrap_err();
        println!("{:<16} {bad:?}\n                 {err}", err.kind());
    }
}
