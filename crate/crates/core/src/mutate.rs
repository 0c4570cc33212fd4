//! Single-site mutations of a sentence, modelled on common translation
//! slips. Used to grow test corpora from known-good answers.

use std::fmt;

use crate::syntax::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mutation {
    /// `-F` becomes `F`.
    DropNegation,
    /// `all` becomes `exists` and vice versa.
    SwapQuantifier,
    /// `R(s, t)` becomes `R(t, s)`.
    SwapArguments,
    /// A conjunct `s != t` is removed.
    DropDistinctness,
}

impl Mutation {
    pub fn name(self) -> &'static str {
        match self {
            Mutation::DropNegation => "drop-negation",
            Mutation::SwapQuantifier => "swap-quantifier",
            Mutation::SwapArguments => "swap-arguments",
            Mutation::DropDistinctness => "drop-distinctness",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every formula obtained from `f` by one mutation, in pre-order of the
/// mutated site. Duplicates and copies of `f` itself are left out.
pub fn mutants(f: &Formula) -> Vec<(Mutation, Formula)> {
    let mut out: Vec<(Mutation, Formula)> = Vec::new();
    for (m, g) in rewrites(f) {
        if &g != f && !out.iter().any(|(_, h)| h == &g) {
            out.push((m, g));
        }
    }
    out
}

fn is_distinctness(f: &Formula) -> bool {
    matches!(f, Formula::Not(g) if matches!(**g, Formula::Eq(..)))
}

fn local(f: &Formula) -> Vec<(Mutation, Formula)> {
    match f {
        Formula::Not(g) => vec![(Mutation::DropNegation, (**g).clone())],
        Formula::ForAll(v, b) => vec![(Mutation::SwapQuantifier, Formula::Exists(v.clone(), b.clone()))],
        Formula::Exists(v, b) => vec![(Mutation::SwapQuantifier, Formula::ForAll(v.clone(), b.clone()))],
        Formula::Atom(p, args) if args.len() == 2 && args[0] != args[1] => vec![(
            Mutation::SwapArguments,
            Formula::Atom(p.clone(), vec![args[1].clone(), args[0].clone()]),
        )],
        Formula::And(l, r) => {
            let mut out = Vec::new();
            if is_distinctness(l) {
                out.push((Mutation::DropDistinctness, (**r).clone()));
            }
            if is_distinctness(r) {
                out.push((Mutation::DropDistinctness, (**l).clone()));
            }
            out
        }
        _ => Vec::new(),
    }
}

fn rewrites(f: &Formula) -> Vec<(Mutation, Formula)> {
    let mut out = local(f);
    let binary = |l: &Formula, r: &Formula, make: fn(Formula, Formula) -> Formula| {
        let mut v: Vec<(Mutation, Formula)> = rewrites(l)
            .into_iter()
            .map(|(m, l2)| (m, make(l2, r.clone())))
            .collect();
        v.extend(rewrites(r).into_iter().map(|(m, r2)| (m, make(l.clone(), r2))));
        v
    };
    match f {
        Formula::Atom(..) | Formula::Eq(..) => {}
        Formula::Not(g) => out.extend(rewrites(g).into_iter().map(|(m, g2)| (m, Formula::not(g2)))),
        Formula::ForAll(v, b) => out.extend(rewrites(b).into_iter().map(|(m, b2)| (m, Formula::forall(v, b2)))),
        Formula::Exists(v, b) => out.extend(rewrites(b).into_iter().map(|(m, b2)| (m, Formula::exists(v, b2)))),
        Formula::And(l, r) => out.extend(binary(l, r, Formula::and)),
        Formula::Or(l, r) => out.extend(binary(l, r, Formula::or)),
        Formula::Implies(l, r) => out.extend(binary(l, r, Formula::implies)),
        Formula::Iff(l, r) => out.extend(binary(l, r, Formula::iff)),
    }
    out
}
