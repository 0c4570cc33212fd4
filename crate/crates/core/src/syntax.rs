//! Abstract syntax of first-order logic with equality.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Prefix reserved for Skolem symbols introduced during clausification.
pub const SKOLEM_PREFIX: &str = "sk";

/// Returns true for identifiers of the form `sk<digits>`.
pub fn is_reserved_name(name: &str) -> bool {
    name.strip_prefix(SKOLEM_PREFIX)
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

/// Lexical convention: identifiers starting with a lowercase letter are variables.
pub fn is_variable_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self {
            Term::Var(x) => x == v,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Number of symbol occurrences.
    pub fn weight(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::weight).sum::<usize>(),
        }
    }

    /// Replaces every occurrence of variable `v` by `t`. Terms have no binders.
    pub fn replace_var(&self, v: &str, t: &Term) -> Term {
        match self {
            Term::Var(x) if x == v => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.replace_var(v, t)).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.to_string(), args)
    }

    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Eq(l, r)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::ForAll(v.to_string(), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, out: &mut BTreeSet<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| add_term(a, out)),
            Formula::Eq(l, r) => {
                add_term(l, out);
                add_term(r, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Free variables in order of first occurrence, left to right.
    pub fn free_variables_ordered(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            let term = |t: &Term, out: &mut Vec<String>| {
                let mut stack = vec![t];
                let mut seen = Vec::new();
                while let Some(t) = stack.pop() {
                    match t {
                        Term::Var(x) => seen.push(x.clone()),
                        Term::Const(_) => {}
                        Term::App(_, args) => stack.extend(args.iter().rev()),
                    }
                }
                for x in seen {
                    if !bound.contains(&x) && !out.contains(&x) {
                        out.push(x);
                    }
                }
            };
            match f {
                Formula::Atom(_, args) => args.iter().for_each(|a| term(a, out)),
                Formula::Eq(l, r) => {
                    term(l, out);
                    term(r, out);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(l, r)
                | Formula::Or(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => {
                    walk(l, bound, out);
                    walk(r, bound, out);
                }
                Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                    bound.push(v.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(&mut out)),
            Formula::Eq(l, r) => {
                l.collect_vars(&mut out);
                r.collect_vars(&mut out);
            }
            Formula::ForAll(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal over subformulas.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Atom(..) | Formula::Eq(..) => {}
            Formula::Not(g) | Formula::ForAll(_, g) | Formula::Exists(_, g) => g.visit(f),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `var`.
    pub fn substitute(&self, var: &str, t: &Term) -> Formula {
        let avoid = t.vars();
        self.subst_inner(var, t, &avoid)
    }

    fn subst_inner(&self, var: &str, t: &Term, avoid: &BTreeSet<String>) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.replace_var(var, t)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(l.replace_var(var, t), r.replace_var(var, t)),
            Formula::Not(g) => Formula::not(g.subst_inner(var, t, avoid)),
            Formula::And(l, r) => {
                Formula::and(l.subst_inner(var, t, avoid), r.subst_inner(var, t, avoid))
            }
            Formula::Or(l, r) => {
                Formula::or(l.subst_inner(var, t, avoid), r.subst_inner(var, t, avoid))
            }
            Formula::Implies(l, r) => {
                Formula::implies(l.subst_inner(var, t, avoid), r.subst_inner(var, t, avoid))
            }
            Formula::Iff(l, r) => {
                Formula::iff(l.subst_inner(var, t, avoid), r.subst_inner(var, t, avoid))
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let rebuild = |v: String, b: Formula| match self {
                    Formula::ForAll(..) => Formula::ForAll(v, Box::new(b)),
                    _ => Formula::Exists(v, Box::new(b)),
                };
                if v == var || !body.free_variables().contains(var) {
                    return self.clone();
                }
                if avoid.contains(v) {
                    let mut taken = body.all_variables();
                    taken.extend(avoid.iter().cloned());
                    taken.insert(var.to_string());
                    let fresh = fresh_variant(v, &taken);
                    let renamed = body.subst_inner(v, &Term::Var(fresh.clone()), &BTreeSet::new());
                    rebuild(fresh, renamed.subst_inner(var, t, avoid))
                } else {
                    rebuild(v.clone(), body.subst_inner(var, t, avoid))
                }
            }
        }
    }

    /// Structural equality modulo consistent renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

/// Appends primes to `base` until it avoids `taken`.
pub fn fresh_variant(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    let mut n = 1;
    while taken.contains(&name) {
        name = format!("{base}{n}");
        n += 1;
    }
    name
}

fn alpha_eq_in(a: &Formula, b: &Formula, bound: &mut Vec<(String, String)>) -> bool {
    fn term_eq(a: &Term, b: &Term, bound: &[(String, String)]) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                // innermost binder wins
                let lx = bound.iter().rposition(|(l, _)| l == x);
                let ry = bound.iter().rposition(|(_, r)| r == y);
                match (lx, ry) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, bound))
            }
            _ => false,
        }
    }
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, bound))
        }
        (Formula::Eq(l1, r1), Formula::Eq(l2, r2)) => {
            term_eq(l1, l2, bound) && term_eq(r1, r2, bound)
        }
        (Formula::Not(x), Formula::Not(y)) => alpha_eq_in(x, y, bound),
        (Formula::And(l1, r1), Formula::And(l2, r2))
        | (Formula::Or(l1, r1), Formula::Or(l2, r2))
        | (Formula::Implies(l1, r1), Formula::Implies(l2, r2))
        | (Formula::Iff(l1, r1), Formula::Iff(l2, r2)) => {
            alpha_eq_in(l1, l2, bound) && alpha_eq_in(r1, r2, bound)
        }
        (Formula::ForAll(v, x), Formula::ForAll(w, y))
        | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
            bound.push((v.clone(), w.clone()));
            let eq = alpha_eq_in(x, y, bound);
            bound.pop();
            eq
        }
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared more than once")]
    Duplicate(String),
    #[error("symbol `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("symbol `{0}` must start with an uppercase letter")]
    BadName(String),
}

/// The constants, functions and predicates an exercise allows.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub constants: BTreeSet<String>,
    #[serde(default)]
    pub functions: BTreeMap<String, usize>,
    #[serde(default)]
    pub predicates: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_constants<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.constants.extend(names.into_iter().map(String::from));
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.functions.insert(name.to_string(), arity);
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.predicates.insert(name.to_string(), arity);
        self
    }

    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut seen = BTreeSet::new();
        let names = self
            .constants
            .iter()
            .map(|c| (c, None))
            .chain(self.functions.iter().map(|(f, a)| (f, Some(*a))))
            .chain(self.predicates.iter().map(|(p, a)| (p, Some(*a))));
        for (name, arity) in names {
            let starts_upper = name.chars().next().is_some_and(|c| c.is_ascii_uppercase());
            let well_formed = name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !starts_upper || !well_formed {
                return Err(SignatureError::BadName(name.clone()));
            }
            if arity == Some(0) {
                return Err(SignatureError::ZeroArity(name.clone()));
            }
            if !seen.insert(name) {
                return Err(SignatureError::Duplicate(name.clone()));
            }
        }
        Ok(())
    }

    pub fn declares(&self, name: &str) -> bool {
        self.constants.contains(name)
            || self.functions.contains_key(name)
            || self.predicates.contains_key(name)
    }

    /// Smallest signature covering every symbol of `f`, with arities as used.
    pub fn of_formula(f: &Formula) -> Signature {
        let mut sig = Signature::new();
        fn term(t: &Term, sig: &mut Signature) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    sig.constants.insert(c.clone());
                }
                Term::App(g, args) => {
                    sig.functions.insert(g.clone(), args.len());
                    args.iter().for_each(|a| term(a, sig));
                }
            }
        }
        f.visit(&mut |g| match g {
            Formula::Atom(p, args) => {
                sig.predicates.insert(p.clone(), args.len());
                args.iter().for_each(|a| term(a, &mut sig));
            }
            Formula::Eq(l, r) => {
                term(l, &mut sig);
                term(r, &mut sig);
            }
            _ => {}
        });
        sig
    }

    pub fn merge(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        out.constants.extend(other.constants.iter().cloned());
        out.functions.extend(other.functions.iter().map(|(k, v)| (k.clone(), *v)));
        out.predicates.extend(other.predicates.iter().map(|(k, v)| (k.clone(), *v)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(args: Vec<Term>) -> Formula {
        Formula::atom("P", args)
    }

    #[test]
    fn free_variables_basic() {
        let f = Formula::forall("x", Formula::atom("P", vec![Term::var("x"), Term::var("y")]));
        assert_eq!(f.free_variables(), BTreeSet::from(["y".to_string()]));

        let g = Formula::and(
            p(vec![Term::var("x")]),
            Formula::exists("x", Formula::atom("Q", vec![Term::var("x")])),
        );
        assert_eq!(g.free_variables(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn substitute_examples() {
        let f = p(vec![Term::var("x")]);
        assert_eq!(f.substitute("x", &Term::constant("Joe")), p(vec![Term::constant("Joe")]));

        let bound = Formula::forall("x", p(vec![Term::var("x")]));
        assert_eq!(bound.substitute("x", &Term::constant("Joe")), bound);

        // exists y R(x,y) [x := f(y)] must rename y
        let g = Formula::exists("y", Formula::atom("R", vec![Term::var("x"), Term::var("y")]));
        let fy = Term::app("F", vec![Term::var("y")]);
        let out = g.substitute("x", &fy);
        match &out {
            Formula::Exists(v, body) => {
                assert_ne!(v, "y");
                assert_eq!(
                    **body,
                    Formula::atom("R", vec![fy.clone(), Term::Var(v.clone())])
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(out.free_variables(), BTreeSet::from(["y".to_string()]));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::forall("x", Formula::exists("y", Formula::atom("R", vec![Term::var("x"), Term::var("y")])));
        let b = Formula::forall("u", Formula::exists("v", Formula::atom("R", vec![Term::var("u"), Term::var("v")])));
        let c = Formula::forall("u", Formula::exists("v", Formula::atom("R", vec![Term::var("v"), Term::var("u")])));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        // shadowing
        let d = Formula::forall("x", Formula::forall("x", p(vec![Term::var("x")])));
        let e = Formula::forall("y", Formula::forall("z", p(vec![Term::var("z")])));
        let g = Formula::forall("y", Formula::forall("z", p(vec![Term::var("y")])));
        assert!(d.alpha_eq(&e));
        assert!(!d.alpha_eq(&g));
    }

    #[test]
    fn signature_validation() {
        let ok = Signature::new()
            .with_constants(["Joe", "Lawyer"])
            .with_predicate("Occupation", 2);
        assert!(ok.validate().is_ok());
        let clash = ok.clone().with_function("Joe", 1);
        assert_eq!(clash.validate(), Err(SignatureError::Duplicate("Joe".into())));
        let zero = Signature::new().with_predicate("P", 0);
        assert_eq!(zero.validate(), Err(SignatureError::ZeroArity("P".into())));
        let lower = Signature::new().with_constants(["joe"]);
        assert!(matches!(lower.validate(), Err(SignatureError::BadName(_))));
    }

    #[test]
    fn reserved_names() {
        assert!(is_reserved_name("sk1"));
        assert!(is_reserved_name("sk42"));
        assert!(!is_reserved_name("sk"));
        assert!(!is_reserved_name("skx"));
        assert!(!is_reserved_name("Sk1"));
    }
}
