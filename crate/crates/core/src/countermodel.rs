//! Countermodels: interpretations that falsify a sentence, presented as a
//! short list of ground facts over named domain elements.

use std::collections::BTreeSet;
use std::fmt;

use crate::models::{enumerate_models_with, Enumeration, EnumerationLimits};
use crate::normalize::{Atom, Literal};
use crate::semantics::{evaluate_sentence, tuple_at, Interpretation};
use crate::syntax::{Formula, Signature, Term};
use crate::tableau::{tableau_search, TableauBudget, TableauOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    /// Display name of each domain element, in element order.
    pub domain: Vec<String>,
    /// Ground facts that hold in the interpretation, predicates before equalities.
    pub literals: Vec<Literal>,
    pub falsified: Formula,
    /// The certified structure; witness names are mapped as constants.
    pub interpretation: Interpretation,
}

impl Countermodel {
    pub fn domain_size(&self) -> usize {
        self.interpretation.domain_size
    }

    /// Re-checks every listed fact and that the formula is false.
    pub fn certify(&self) -> bool {
        let facts_hold = self.literals.iter().all(|l| {
            evaluate_sentence(&l.to_formula(), &self.interpretation).unwrap_or(false)
        });
        facts_hold && evaluate_sentence(&self.falsified, &self.interpretation) == Ok(false)
    }

    /// Domain line followed by one fact per line.
    pub fn render(&self) -> String {
        let mut out = format!("domain: {}\n", self.domain.join(", "));
        for l in &self.literals {
            out.push_str(&l.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Names for witnesses: `B`, `C`, ... `Z`, then `W1`, `W2`, ..., skipping taken names.
pub(crate) fn next_witness_name(taken: &BTreeSet<String>) -> String {
    ('B'..='Z')
        .map(String::from)
        .chain((1..).map(|n| format!("W{n}")))
        .find(|n| !taken.contains(n))
        .expect("infinite name supply")
}

/// Orders literals predicates-then-equalities, keeping relative order, and
/// drops duplicates and predicates outside `sig`.
pub(crate) fn presentable(literals: &[Literal], sig: &Signature) -> Vec<Literal> {
    let mut seen = BTreeSet::new();
    let kept: Vec<&Literal> = literals
        .iter()
        .filter(|l| l.atom.is_equality() || sig.predicates.contains_key(&l.atom.predicate))
        .filter(|l| seen.insert((*l).clone()))
        .collect();
    kept.iter()
        .filter(|l| !l.atom.is_equality())
        .chain(kept.iter().filter(|l| l.atom.is_equality()))
        .map(|l| (*l).clone())
        .collect()
}

/// Presents an interpretation that falsifies `f` as a countermodel.
///
/// Elements are named after the signature constants denoting them, or by
/// fresh witness names. Facts cover the predicates of `sig` occurring in
/// `f`, constants that share an element, and function values.
pub fn extract_from_interpretation(interp: &Interpretation, f: &Formula, sig: &Signature) -> Countermodel {
    let n = interp.domain_size;
    let used = Signature::of_formula(f);
    let mut names: Vec<Option<String>> = vec![None; n];
    for c in &sig.constants {
        if let Some(&d) = interp.constants.get(c) {
            names[d].get_or_insert_with(|| c.clone());
        }
    }
    let mut taken: BTreeSet<String> = sig
        .constants
        .iter()
        .chain(sig.functions.keys())
        .chain(sig.predicates.keys())
        .chain(used.constants.iter())
        .cloned()
        .collect();
    let domain: Vec<String> = names
        .into_iter()
        .map(|name| {
            name.unwrap_or_else(|| {
                let w = next_witness_name(&taken);
                taken.insert(w.clone());
                w
            })
        })
        .collect();
    let mut interpretation = interp.clone();
    for (d, name) in domain.iter().enumerate() {
        interpretation.constants.entry(name.clone()).or_insert(d);
    }
    let element = |d: usize| Term::Const(domain[d].clone());

    let mut literals = Vec::new();
    for (p, rel) in &interp.predicates {
        if !sig.predicates.contains_key(p) || !used.predicates.contains_key(p) {
            continue;
        }
        for (idx, &holds) in rel.holds.iter().enumerate() {
            let args = tuple_at(idx, rel.arity, n).into_iter().map(element).collect();
            let atom = Atom::new(p, args);
            literals.push(if holds { Literal::pos(atom) } else { Literal::neg(atom) });
        }
    }
    for c in &sig.constants {
        if let Some(&d) = interp.constants.get(c) {
            if &domain[d] != c {
                literals.push(Literal::pos(Atom::equality(Term::Const(c.clone()), element(d))));
            }
        }
    }
    for (g, table) in &interp.functions {
        if !sig.functions.contains_key(g) {
            continue;
        }
        for (idx, &v) in table.values.iter().enumerate() {
            let args = tuple_at(idx, table.arity, n).into_iter().map(element).collect();
            literals.push(Literal::pos(Atom::equality(Term::App(g.clone(), args), element(v))));
        }
    }
    Countermodel {
        domain,
        literals: presentable(&literals, sig),
        falsified: f.clone(),
        interpretation,
    }
}

/// Looks for an interpretation in which `f` is false.
///
/// The ground tableau runs first; if it neither closes nor finds a
/// certified model, finite models of `-f` are enumerated. `None` does not
/// mean `f` is valid.
pub fn find_countermodel(f: &Formula, sig: &Signature, budget: &TableauBudget) -> Option<Countermodel> {
    match tableau_search(f, sig, budget) {
        TableauOutcome::Countermodel(cm) => Some(cm),
        TableauOutcome::Closed | TableauOutcome::Interrupted => None,
        TableauOutcome::Open => {
            let limits = EnumerationLimits {
                max_domain: budget.max_domain_size,
                cap: budget.enumeration_cap,
            };
            let negated = Formula::not(f.clone());
            match enumerate_models_with(&negated, sig, &limits, &budget.stop) {
                Ok(Enumeration::Found(interp)) => {
                    let cm = extract_from_interpretation(&interp, f, sig);
                    debug_assert!(cm.certify(), "enumerated countermodel failed certification");
                    cm.certify().then_some(cm)
                }
                _ => None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn witness_names_skip_taken() {
        let taken: BTreeSet<String> = ["B", "C", "E"].iter().map(|s| s.to_string()).collect();
        assert_eq!(next_witness_name(&taken), "D");
        let all: BTreeSet<String> = ('B'..='Z').map(String::from).collect();
        assert_eq!(next_witness_name(&all), "W1");
    }

    #[test]
    fn one_element_extraction_filters_by_signature() {
        let full = Signature::new().with_constants(["Joe"]).with_predicate("P", 1).with_predicate("Q", 1);
        let f = parse("P(Joe) | Q(Joe)", &full).unwrap();
        let mut interp = Interpretation::trivial(&full, 1);
        interp.constants.insert("Joe".into(), 0);
        let with_p = extract_from_interpretation(&interp, &f, &full);
        assert!(with_p.certify());
        assert_eq!(with_p.domain, vec!["Joe"]);
        assert!(with_p.literals.iter().any(|l| l.to_string() == "-P(Joe)"));

        let no_p = Signature::new().with_constants(["Joe"]).with_predicate("Q", 1);
        let without = extract_from_interpretation(&interp, &f, &no_p);
        assert!(without.literals.iter().all(|l| l.atom.predicate != "P"));
        assert!(without.certify());
    }

    #[test]
    fn shared_elements_render_once() {
        let sig = Signature::new().with_constants(["Actor", "Joe"]).with_predicate("Occupation", 2);
        let f = parse("Joe != Actor", &sig).unwrap();
        let interp = Interpretation::trivial(&sig, 1);
        let cm = extract_from_interpretation(&interp, &f, &sig);
        assert_eq!(cm.domain, vec!["Actor"]);
        assert!(cm.literals.iter().any(|l| l.to_string() == "Joe = Actor"));
        assert!(cm.certify());
    }

    #[test]
    fn fallback_enumeration_handles_functions() {
        let sig = Signature::new().with_constants(["A"]).with_function("F", 1).with_predicate("P", 1);
        // false exactly when F maps A somewhere P fails
        let f = parse("P(A) -> P(F(A))", &sig).unwrap();
        let cm = find_countermodel(&f, &sig, &TableauBudget::default()).unwrap();
        assert!(cm.certify());
    }
}
