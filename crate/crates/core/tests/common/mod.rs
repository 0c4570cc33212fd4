#![allow(dead_code)]

pub mod checks;

use folgrade::{Formula, Interpretation, Signature, Term};
use proptest::prelude::*;

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// P/1 and R/2, nothing else.
pub fn two_predicates() -> Signature {
    Signature::new().with_predicate("P", 1).with_predicate("R", 2)
}

/// Constants A, B; functions F/1, G/2; predicates P/1, R/2.
pub fn rich() -> Signature {
    two_predicates()
        .with_constants(["A", "B"])
        .with_function("F", 1)
        .with_function("G", 2)
}

pub fn var() -> impl Strategy<Value = String> {
    prop::sample::select(&VARS[..]).prop_map(String::from)
}

pub fn term(with_symbols: bool) -> BoxedStrategy<Term> {
    let leaf = if with_symbols {
        prop_oneof![
            3 => var().prop_map(Term::Var),
            1 => prop::sample::select(vec!["A", "B"]).prop_map(Term::constant),
        ]
        .boxed()
    } else {
        var().prop_map(Term::Var).boxed()
    };
    if !with_symbols {
        return leaf;
    }
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("F", vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("G", vec![a, b])),
        ]
    })
    .boxed()
}

pub fn atom(with_symbols: bool) -> BoxedStrategy<Formula> {
    prop_oneof![
        3 => term(with_symbols).prop_map(|t| Formula::atom("P", vec![t])),
        3 => (term(with_symbols), term(with_symbols)).prop_map(|(a, b)| Formula::atom("R", vec![a, b])),
        1 => (term(with_symbols), term(with_symbols)).prop_map(|(a, b)| Formula::eq(a, b)),
    ]
    .boxed()
}

/// Arbitrary formulas, possibly open.
pub fn formula(with_symbols: bool, depth: u32) -> BoxedStrategy<Formula> {
    atom(with_symbols)
        .prop_recursive(depth, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
                (var(), inner.clone()).prop_map(|(v, b)| Formula::forall(&v, b)),
                (var(), inner).prop_map(|(v, b)| Formula::exists(&v, b)),
            ]
        })
        .boxed()
}

/// Universal closure, so the result is a sentence.
pub fn close(f: Formula) -> Formula {
    f.free_variables_ordered()
        .into_iter()
        .rev()
        .fold(f, |acc, v| Formula::forall(&v, acc))
}

pub fn sentence(with_symbols: bool, depth: u32) -> BoxedStrategy<Formula> {
    formula(with_symbols, depth).prop_map(close).boxed()
}

/// Every interpretation of `two_predicates()` with 1 to `max` elements.
pub fn all_interpretations(max: usize) -> Vec<Interpretation> {
    let sig = two_predicates();
    let mut out = Vec::new();
    for n in 1..=max {
        let (p_bits, r_bits) = (n, n * n);
        for mask in 0u64..(1u64 << (p_bits + r_bits)) {
            let mut i = Interpretation::trivial(&sig, n);
            let p = &mut i.predicates.get_mut("P").unwrap().holds;
            for (k, h) in p.iter_mut().enumerate() {
                *h = mask >> k & 1 == 1;
            }
            let r = &mut i.predicates.get_mut("R").unwrap().holds;
            for (k, h) in r.iter_mut().enumerate() {
                *h = mask >> (p_bits + k) & 1 == 1;
            }
            out.push(i);
        }
    }
    out
}
