//! Syntactic unification with occurs check, and one-way matching.

use std::collections::BTreeMap;
use std::fmt;

use crate::normalize::{Atom, Clause, Literal};
use crate::syntax::Term;

/// Idempotent variable bindings: no bound variable occurs in any binding's range.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    /// Builds a substitution from raw pairs, resolving chains so the result
    /// is idempotent. Returns `None` when the pairs are cyclic.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Term)>) -> Option<Self> {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            let t = s.apply(&t);
            match s.bindings.get(&v).cloned() {
                Some(existing) => s = unify_with(s, &existing, &t)?,
                None => {
                    if t == Term::Var(v.clone()) {
                        continue;
                    }
                    if t.contains_var(&v) {
                        return None;
                    }
                    s.bind(v, t);
                }
            }
        }
        Some(s)
    }

    fn bind(&mut self, var: String, t: Term) {
        for value in self.bindings.values_mut() {
            *value = value.replace_var(&var, &t);
        }
        self.bindings.insert(var, t);
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        a.map_terms(&|t| self.apply(t))
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal {
            positive: l.positive,
            atom: self.apply_atom(&l.atom),
        }
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        c.map_terms(&|t| self.apply(t))
    }

    /// The substitution that applies `self` and then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut bindings: BTreeMap<String, Term> = self
            .bindings
            .iter()
            .map(|(v, t)| (v.clone(), other.apply(t)))
            .filter(|(v, t)| *t != Term::Var(v.clone()))
            .collect();
        for (v, t) in &other.bindings {
            bindings.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution { bindings }
    }

    pub fn is_idempotent(&self) -> bool {
        self.bindings
            .values()
            .all(|t| self.bindings.keys().all(|v| !t.contains_var(v)))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// Extends `s` to a most general unifier of `a` and `b`, if one exists.
pub fn unify_with(mut s: Substitution, a: &Term, b: &Term) -> Option<Substitution> {
    let mut work = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = work.pop() {
        let x = s.apply(&x);
        let y = s.apply(&y);
        if x == y {
            continue;
        }
        match (x, y) {
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.contains_var(&v) {
                    return None;
                }
                s.bind(v, t);
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                work.extend(xs.into_iter().zip(ys));
            }
            _ => return None,
        }
    }
    Some(s)
}

pub fn unify_terms(a: &Term, b: &Term) -> Option<Substitution> {
    unify_with(Substitution::new(), a, b)
}

pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    if a.predicate != b.predicate || a.args.len() != b.args.len() {
        return None;
    }
    let mut s = Substitution::new();
    for (x, y) in a.args.iter().zip(&b.args) {
        s = unify_with(s, x, y)?;
    }
    Some(s)
}

/// Anything unification applies to: terms, or atoms compared as predicate applications.
pub trait Unifiable {
    fn unify(&self, other: &Self) -> Option<Substitution>;
}

impl Unifiable for Term {
    fn unify(&self, other: &Self) -> Option<Substitution> {
        unify_terms(self, other)
    }
}

impl Unifiable for Atom {
    fn unify(&self, other: &Self) -> Option<Substitution> {
        unify_atoms(self, other)
    }
}

pub fn unify<T: Unifiable>(a: &T, b: &T) -> Option<Substitution> {
    a.unify(b)
}

/// One-way matching: binds only variables of `pattern`; `target` is treated as ground.
pub fn match_term(pattern: &Term, target: &Term, binds: &mut BTreeMap<String, Term>) -> bool {
    match pattern {
        Term::Var(v) => match binds.get(v) {
            Some(t) => t == target,
            None => {
                binds.insert(v.clone(), target.clone());
                true
            }
        },
        Term::Const(c) => matches!(target, Term::Const(d) if c == d),
        Term::App(f, xs) => match target {
            Term::App(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(x, y)| match_term(x, y, binds))
            }
            _ => false,
        },
    }
}

pub fn match_literal(p: &Literal, t: &Literal, binds: &mut BTreeMap<String, Term>) -> bool {
    if p.positive != t.positive
        || p.atom.predicate != t.atom.predicate
        || p.atom.args.len() != t.atom.args.len()
    {
        return false;
    }
    let saved = binds.clone();
    let ok = p
        .atom
        .args
        .iter()
        .zip(&t.atom.args)
        .all(|(x, y)| match_term(x, y, binds));
    if !ok {
        *binds = saved;
    }
    ok
}

/// Multiset subsumption: some instance of `c` maps its literals injectively into `d`.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.len() > d.len() {
        return false;
    }
    fn go(c: &[Literal], d: &[Literal], used: &mut Vec<bool>, binds: &BTreeMap<String, Term>) -> bool {
        let Some((first, rest)) = c.split_first() else {
            return true;
        };
        for (j, lit) in d.iter().enumerate() {
            if used[j] {
                continue;
            }
            let mut b = binds.clone();
            if match_literal(first, lit, &mut b) {
                used[j] = true;
                if go(rest, d, used, &b) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(&c.literals, &d.literals, &mut vec![false; d.len()], &BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }
    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn unifies_occupation_atoms() {
        let a = Atom::new("Occupation", vec![v("x"), c("Lawyer")]);
        let b = Atom::new("Occupation", vec![c("Joe"), v("y")]);
        let s = unify(&a, &b).unwrap();
        assert_eq!(s.get("x"), Some(&c("Joe")));
        assert_eq!(s.get("y"), Some(&c("Lawyer")));
        assert_eq!(s.len(), 2);
        assert_eq!(s.apply_atom(&a), s.apply_atom(&b));
    }

    #[test]
    fn occurs_check_fails() {
        assert_eq!(unify(&v("x"), &Term::app("F", vec![v("x")])), None);
    }

    #[test]
    fn distinct_constants_fail() {
        assert_eq!(unify(&c("Joe"), &c("Lawyer")), None);
        let a = Atom::new("P", vec![c("Joe")]);
        let b = Atom::new("Q", vec![c("Joe")]);
        assert_eq!(unify(&a, &b), None);
    }

    #[test]
    fn result_is_idempotent_across_chains() {
        // F(x, y, z) = F(y, z, G(w))
        let a = Term::app("F", vec![v("x"), v("y"), v("z")]);
        let b = Term::app("F", vec![v("y"), v("z"), Term::app("G", vec![v("w")])]);
        let s = unify(&a, &b).unwrap();
        assert!(s.is_idempotent());
        assert_eq!(s.apply(&a), s.apply(&b));
        assert_eq!(s.apply(&s.apply(&a)), s.apply(&a));
    }

    #[test]
    fn indirect_occurs_check() {
        // F(x, G(x)) = F(G(y), y)
        let a = Term::app("F", vec![v("x"), Term::app("G", vec![v("x")])]);
        let b = Term::app("F", vec![Term::app("G", vec![v("y")]), v("y")]);
        assert_eq!(unify(&a, &b), None);
    }

    #[test]
    fn subsumption_is_multiset_based() {
        let p = |t: Term| Literal::pos(Atom::new("P", vec![t]));
        let general = Clause::new(vec![p(v("x")), p(v("y"))]);
        let factor = Clause::new(vec![p(v("z"))]);
        assert!(subsumes(&factor, &general));
        assert!(!subsumes(&general, &factor));
        let instance = Clause::new(vec![p(c("A")), p(c("B")), Literal::neg(Atom::new("Q", vec![c("A")]))]);
        assert!(subsumes(&general, &instance));
        let wrong_sign = Clause::new(vec![Literal::neg(Atom::new("P", vec![c("A")]))]);
        assert!(!subsumes(&factor, &wrong_sign));
    }

    #[test]
    fn composition_applies_in_order() {
        let s = Substitution::from_pairs([("x".to_string(), v("y"))]).unwrap();
        let t = Substitution::from_pairs([("y".to_string(), c("A"))]).unwrap();
        let st = s.then(&t);
        assert_eq!(st.apply(&v("x")), c("A"));
        assert_eq!(st.apply(&v("y")), c("A"));
    }
}
