//! Property bodies shared by the property suites and the acceptance run.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Duration;

use folgrade::models::{enumerate_models_with, Enumeration, EnumerationLimits};
use folgrade::normalize::{clausify, rename_bound_apart, skolemize, to_nnf};
use folgrade::unify::{unify, Substitution};
use folgrade::{
    evaluate, evaluate_sentence, find_countermodel, format, parse, Formula, Interpretation, Signature,
    StopToken, TableauBudget, Term,
};
use proptest::prelude::*;

use super::{all_interpretations, rich, two_predicates};

pub type Check = Result<(), TestCaseError>;

fn interpretations() -> &'static [Interpretation] {
    static ALL: OnceLock<Vec<Interpretation>> = OnceLock::new();
    ALL.get_or_init(|| all_interpretations(3))
}

fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => true,
        Formula::Not(g) => matches!(**g, Formula::Atom(..) | Formula::Eq(..)),
        Formula::And(a, b) | Formula::Or(a, b) => is_nnf(a) && is_nnf(b),
        Formula::ForAll(_, b) | Formula::Exists(_, b) => is_nnf(b),
        Formula::Implies(..) | Formula::Iff(..) => false,
    }
}

fn has_exists(f: &Formula) -> bool {
    let mut found = false;
    f.visit(&mut |g| found |= matches!(g, Formula::Exists(..)));
    found
}

fn find_model(f: &Formula, sig: &Signature, max: usize) -> Option<Interpretation> {
    let limits = EnumerationLimits { max_domain: max, cap: 1 << 22 };
    match enumerate_models_with(f, sig, &limits, &StopToken::unbounded()) {
        Ok(Enumeration::Found(m)) => Some(m),
        _ => None,
    }
}

/// Ground generalization of `g`: some subterms replaced by variables, the
/// same subterm always by the same variable.
fn generalize(g: &Term, cut: &mut impl Iterator<Item = bool>, names: &mut Vec<Term>) -> Term {
    if cut.next().unwrap_or(false) {
        let i = names.iter().position(|t| t == g).unwrap_or_else(|| {
            names.push(g.clone());
            names.len() - 1
        });
        return Term::var(&format!("v{i}"));
    }
    match g {
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| generalize(a, cut, names)).collect()),
        _ => g.clone(),
    }
}

pub fn ground_term() -> BoxedStrategy<Term> {
    prop::sample::select(vec!["A", "B"])
        .prop_map(Term::constant)
        .prop_recursive(3, 10, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|t| Term::app("F", vec![t])),
                (inner.clone(), inner).prop_map(|(a, b)| Term::app("G", vec![a, b])),
            ]
        })
        .boxed()
}

pub fn round_trip(f: Formula) -> Check {
    let text = format(&f);
    let back = parse(&text, &rich()).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(back, f, "{}", text);
    Ok(())
}

/// Two generalizations of one ground term always unify; the unifier is
/// idempotent and the ground instance factors through it.
pub fn mgu(g: Term, left: Vec<bool>, right: Vec<bool>, noise: Term) -> Check {
    let mut names = Vec::new();
    let a = generalize(&g, &mut left.iter().copied(), &mut names);
    let b = generalize(&g, &mut right.iter().copied(), &mut names);
    let theta = Substitution::from_pairs(names.iter().enumerate().map(|(i, t)| (format!("v{i}"), t.clone()))).unwrap();
    prop_assert_eq!(theta.apply(&a), theta.apply(&b));

    let sigma = unify(&a, &b).expect("a unifier exists");
    prop_assert_eq!(sigma.apply(&a), sigma.apply(&b));
    prop_assert!(sigma.is_idempotent());
    prop_assert_eq!(sigma.apply(&sigma.apply(&a)), sigma.apply(&a));
    for v in a.vars().iter().chain(b.vars().iter()) {
        let t = Term::var(v);
        prop_assert_eq!(theta.apply(&sigma.apply(&t)), theta.apply(&t));
    }

    if let Some(s) = unify(&a, &noise) {
        prop_assert_eq!(s.apply(&a), s.apply(&noise));
        prop_assert!(s.is_idempotent());
    }
    Ok(())
}

pub fn no_capture(f: Formula, v: String, t: Term) -> Check {
    let result = f.substitute(&v, &t);
    let mut allowed = f.free_variables();
    allowed.remove(&v);
    allowed.extend(t.vars());
    prop_assert!(result.free_variables().is_subset(&allowed));
    Ok(())
}

pub fn nnf_preserves_truth(f: Formula) -> Check {
    let nnf = to_nnf(&f);
    prop_assert!(is_nnf(&nnf), "{}", nnf);
    for i in interpretations() {
        prop_assert_eq!(
            evaluate_sentence(&f, i).unwrap(),
            evaluate_sentence(&nnf, i).unwrap(),
            "{} vs {} at {:?}",
            f,
            nnf,
            i
        );
    }
    Ok(())
}

pub fn skolem_preserves_satisfiability(f: Formula) -> Check {
    let sk = skolemize(&to_nnf(&f));
    prop_assert!(!has_exists(&sk), "{}", sk);
    let sk_sig = two_predicates().merge(&Signature::of_formula(&sk));
    match find_model(&f, &two_predicates(), 3) {
        Some(m) => {
            let sk_model = find_model(&sk, &sk_sig, m.domain_size);
            prop_assert!(sk_model.is_some(), "{} has a model but {} does not", f, sk);
            prop_assert!(evaluate_sentence(&f, &sk_model.unwrap()).unwrap());
        }
        // every model of the Skolem form is a model of f
        None => prop_assert!(find_model(&sk, &sk_sig, 1).is_none()),
    }
    Ok(())
}

pub fn bound_names_irrelevant(f: Formula) -> Check {
    let renamed = rename_bound_apart(&f);
    prop_assert!(renamed.alpha_eq(&f));
    for i in interpretations().iter().step_by(7) {
        prop_assert_eq!(
            evaluate(&f, i, &BTreeMap::new()).unwrap(),
            evaluate(&renamed, i, &BTreeMap::new()).unwrap()
        );
    }
    Ok(())
}

pub fn standardized_apart(f: Formula) -> Check {
    let cs = clausify(&f).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for c in &cs.clauses {
        prop_assert!(!c.is_tautology());
        let vars = c.vars();
        prop_assert!(vars.is_disjoint(&seen), "{}", cs);
        seen.extend(vars);
    }
    Ok(())
}

pub fn countermodel_certified(a: Formula, b: Formula) -> Check {
    let sig = two_predicates();
    let f = Formula::iff(a, b);
    let budget = TableauBudget::with_stop(StopToken::after(Duration::from_secs(2)));
    if let Some(cm) = find_countermodel(&f, &sig, &budget) {
        prop_assert!(cm.certify());
        prop_assert_eq!(&cm.falsified, &f);
        prop_assert_eq!(evaluate_sentence(&f, &cm.interpretation), Ok(false));
        for lit in &cm.literals {
            prop_assert_eq!(evaluate_sentence(&lit.to_formula(), &cm.interpretation), Ok(true));
        }
    }
    Ok(())
}
