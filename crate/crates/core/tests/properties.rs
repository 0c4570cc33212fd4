mod common;

use common::checks;
use common::*;
use folgrade::{parse, Signature};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn format_then_parse_is_identity(f in sentence(true, 4)) {
        checks::round_trip(f)?;
    }

    #[test]
    fn mgu_unifies_and_is_most_general(
        g in checks::ground_term(),
        left in prop::collection::vec(any::<bool>(), 16),
        right in prop::collection::vec(any::<bool>(), 16),
        noise in term(true),
    ) {
        checks::mgu(g, left, right, noise)?;
    }

    #[test]
    fn substitution_never_captures(f in formula(true, 3), v in var(), t in term(true)) {
        checks::no_capture(f, v, t)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn nnf_preserves_truth_in_every_small_interpretation(f in sentence(false, 4)) {
        checks::nnf_preserves_truth(f)?;
    }

    #[test]
    fn skolemization_preserves_satisfiability(f in sentence(false, 3)) {
        checks::skolem_preserves_satisfiability(f)?;
    }

    #[test]
    fn evaluation_ignores_bound_variable_names(f in sentence(false, 3)) {
        checks::bound_names_irrelevant(f)?;
    }

    #[test]
    fn clauses_are_flat_and_standardized_apart(f in sentence(true, 3)) {
        checks::standardized_apart(f)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn emitted_countermodels_are_certified(a in sentence(false, 3), b in sentence(false, 3)) {
        checks::countermodel_certified(a, b)?;
    }
}

#[test]
fn parser_rejects_symbols_outside_the_signature() {
    let sig = Signature::new()
        .with_constants(["Joe", "Lawyer"])
        .with_predicate("Occupation", 2)
        .with_predicate("Customer", 2);
    let golden = "-(exists x (Occupation(x, Lawyer) & Customer(Joe, x)))";
    for (from, to) in [("Lawyer", "Nurse"), ("Joe", "Jim"), ("Customer", "Client"), ("Occupation", "Job")] {
        let mutated = golden.replace(from, to);
        match parse(&mutated, &sig) {
            Err(folgrade::ParseError::UnknownSymbol { name, .. }) => assert_eq!(name, to),
            other => panic!("{mutated}: {other:?}"),
        }
    }
}
