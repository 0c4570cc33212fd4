//! Clausal normal form: NNF, Skolemization, CNF distribution and clause
//! extraction, plus the equality axioms the resolution prover works with.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{fresh_variant, Formula, Signature, Term, SKOLEM_PREFIX};

/// Predicate name used for equality atoms in clauses.
pub const EQUALITY: &str = "=";

pub const DEFAULT_MAX_CLAUSES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("clausal form would exceed {cap} clauses")]
    ClauseExplosion { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.to_string(),
            args,
        }
    }

    pub fn equality(l: Term, r: Term) -> Self {
        Atom::new(EQUALITY, vec![l, r])
    }

    pub fn is_equality(&self) -> bool {
        self.predicate == EQUALITY
    }

    pub fn weight(&self) -> usize {
        1 + self.args.iter().map(Term::weight).sum::<usize>()
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(f).collect(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        if self.is_equality() {
            Formula::Eq(self.args[0].clone(), self.args[1].clone())
        } else {
            Formula::Atom(self.predicate.clone(), self.args.clone())
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn to_formula(&self) -> Formula {
        let f = self.atom.to_formula();
        if self.positive {
            f
        } else {
            Formula::not(f)
        }
    }

    fn from_formula(f: &Formula) -> Option<Literal> {
        match f {
            Formula::Atom(p, args) => Some(Literal::pos(Atom::new(p, args.clone()))),
            Formula::Eq(l, r) => Some(Literal::pos(Atom::equality(l.clone(), r.clone()))),
            Formula::Not(g) => Literal::from_formula(g).filter(|l| l.positive).map(|l| l.negated()),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// Disjunction of literals; variables are implicitly universally quantified.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn weight(&self) -> usize {
        self.literals.iter().map(|l| l.atom.weight()).sum()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.args.iter().for_each(|t| t.collect_vars(&mut out));
        }
        out
    }

    /// Contains a complementary pair or a trivially true `t = t`.
    pub fn is_tautology(&self) -> bool {
        self.literals.iter().enumerate().any(|(i, l)| {
            (l.positive && l.atom.is_equality() && l.atom.args[0] == l.atom.args[1])
                || self.literals[i + 1..]
                    .iter()
                    .any(|m| m.positive != l.positive && m.atom == l.atom)
        })
    }

    /// Removes duplicate literals, keeping first occurrences in order.
    pub fn dedup(mut self) -> Self {
        let mut seen = BTreeSet::new();
        self.literals.retain(|l| seen.insert(l.clone()));
        self
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Clause {
        Clause {
            literals: self
                .literals
                .iter()
                .map(|l| Literal {
                    positive: l.positive,
                    atom: l.atom.map_terms(f),
                })
                .collect(),
        }
    }

    /// Renames variables to `prefix1`, `prefix2`, ... starting at `*next`.
    pub fn rename_vars(&self, next: &mut usize, prefix: &str) -> Clause {
        let mut map = BTreeMap::new();
        for l in &self.literals {
            for t in &l.atom.args {
                let mut order = Vec::new();
                vars_in_order(t, &mut order);
                for v in order {
                    map.entry(v).or_insert_with(|| {
                        *next += 1;
                        Term::Var(format!("{prefix}{next}"))
                    });
                }
            }
        }
        self.map_terms(&|t| rename_term(t, &map))
    }

    pub fn to_formula(&self) -> Option<Formula> {
        let mut lits = self.literals.iter().map(Literal::to_formula);
        let first = lits.next()?;
        Some(lits.fold(first, Formula::or))
    }
}

fn vars_in_order(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::Const(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| vars_in_order(a, out)),
    }
}

fn rename_term(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| rename_term(a, map)).collect()),
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("$F");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
    /// Number of Skolem symbols introduced so far.
    pub skolem_counter: usize,
}

impl ClauseSet {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn has_equality(&self) -> bool {
        self.clauses
            .iter()
            .flat_map(|c| &c.literals)
            .any(|l| l.atom.is_equality())
    }

    /// Function and predicate symbols occurring in the clauses.
    pub fn signature(&self) -> Signature {
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
        for l in self.clauses.iter().flat_map(|c| &c.literals) {
            if !l.atom.is_equality() {
                sig.predicates.insert(l.atom.predicate.clone(), l.atom.args.len());
            }
            l.atom.args.iter().for_each(|a| term(a, &mut sig));
        }
        sig
    }
}

impl fmt::Display for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}.")?;
        }
        Ok(())
    }
}

/// Negation normal form: no implications or biconditionals, and negation
/// applied only to atoms and equalities.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(g) => nnf(g, !positive),
        Formula::And(l, r) if positive => Formula::and(nnf(l, true), nnf(r, true)),
        Formula::And(l, r) => Formula::or(nnf(l, false), nnf(r, false)),
        Formula::Or(l, r) if positive => Formula::or(nnf(l, true), nnf(r, true)),
        Formula::Or(l, r) => Formula::and(nnf(l, false), nnf(r, false)),
        Formula::Implies(l, r) if positive => Formula::or(nnf(l, false), nnf(r, true)),
        Formula::Implies(l, r) => Formula::and(nnf(l, true), nnf(r, false)),
        Formula::Iff(l, r) if positive => Formula::and(
            Formula::or(nnf(l, false), nnf(r, true)),
            Formula::or(nnf(r, false), nnf(l, true)),
        ),
        Formula::Iff(l, r) => Formula::or(
            Formula::and(nnf(r, true), nnf(l, false)),
            Formula::and(nnf(l, true), nnf(r, false)),
        ),
        Formula::ForAll(v, body) if positive => Formula::forall(v, nnf(body, true)),
        Formula::ForAll(v, body) => Formula::exists(v, nnf(body, false)),
        Formula::Exists(v, body) if positive => Formula::exists(v, nnf(body, true)),
        Formula::Exists(v, body) => Formula::forall(v, nnf(body, false)),
    }
}

/// Gives every quantifier its own variable name.
pub fn rename_bound_apart(f: &Formula) -> Formula {
    let mut taken = f.all_variables();
    let mut used = BTreeSet::new();
    rename_apart_in(f, &mut taken, &mut used)
}

fn rename_apart_in(f: &Formula, taken: &mut BTreeSet<String>, used: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(g) => Formula::not(rename_apart_in(g, taken, used)),
        Formula::And(l, r) => Formula::and(rename_apart_in(l, taken, used), rename_apart_in(r, taken, used)),
        Formula::Or(l, r) => Formula::or(rename_apart_in(l, taken, used), rename_apart_in(r, taken, used)),
        Formula::Implies(l, r) => {
            Formula::implies(rename_apart_in(l, taken, used), rename_apart_in(r, taken, used))
        }
        Formula::Iff(l, r) => Formula::iff(rename_apart_in(l, taken, used), rename_apart_in(r, taken, used)),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let name = if used.contains(v) {
                let fresh = fresh_variant(v, taken);
                taken.insert(fresh.clone());
                fresh
            } else {
                v.clone()
            };
            used.insert(name.clone());
            let body = if &name == v {
                body.as_ref().clone()
            } else {
                body.substitute(v, &Term::Var(name.clone()))
            };
            let body = rename_apart_in(&body, taken, used);
            if matches!(f, Formula::ForAll(..)) {
                Formula::forall(&name, body)
            } else {
                Formula::exists(&name, body)
            }
        }
    }
}

/// Replaces existential quantifiers by fresh Skolem symbols `sk1`, `sk2`, ...
#[derive(Debug, Default)]
pub struct Skolemizer {
    pub counter: usize,
}

impl Skolemizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Input must be an NNF sentence. Each existential becomes a Skolem term
    /// over the enclosing universal variables that occur free in it.
    pub fn skolemize(&mut self, f: &Formula) -> Formula {
        let f = rename_bound_apart(f);
        self.walk(&f, &mut Vec::new())
    }

    fn walk(&mut self, f: &Formula, universals: &mut Vec<String>) -> Formula {
        match f {
            Formula::Atom(..) | Formula::Eq(..) | Formula::Not(_) => f.clone(),
            Formula::And(l, r) => Formula::and(self.walk(l, universals), self.walk(r, universals)),
            Formula::Or(l, r) => Formula::or(self.walk(l, universals), self.walk(r, universals)),
            Formula::ForAll(v, body) => {
                universals.push(v.clone());
                let body = self.walk(body, universals);
                universals.pop();
                Formula::forall(v, body)
            }
            Formula::Exists(v, body) => {
                let free = f.free_variables();
                let args: Vec<Term> = universals
                    .iter()
                    .filter(|u| free.contains(*u))
                    .map(|u| Term::Var(u.clone()))
                    .collect();
                self.counter += 1;
                let name = format!("{SKOLEM_PREFIX}{}", self.counter);
                let witness = if args.is_empty() {
                    Term::Const(name)
                } else {
                    Term::App(name, args)
                };
                let body = body.substitute(v, &witness);
                self.walk(&body, universals)
            }
            Formula::Implies(..) | Formula::Iff(..) => {
                panic!("skolemize expects a formula in negation normal form")
            }
        }
    }
}

pub fn skolemize(f: &Formula) -> Formula {
    Skolemizer::new().skolemize(f)
}

fn strip_universals(f: &Formula) -> Formula {
    match f {
        Formula::ForAll(_, body) => strip_universals(body),
        Formula::And(l, r) => Formula::and(strip_universals(l), strip_universals(r)),
        Formula::Or(l, r) => Formula::or(strip_universals(l), strip_universals(r)),
        _ => f.clone(),
    }
}

fn cnf(f: &Formula, cap: usize) -> Result<Vec<Clause>, NormalizeError> {
    if let Some(lit) = Literal::from_formula(f) {
        return Ok(vec![Clause::new(vec![lit])]);
    }
    match f {
        Formula::And(l, r) => {
            let mut out = cnf(l, cap)?;
            out.extend(cnf(r, cap)?);
            if out.len() > cap {
                return Err(NormalizeError::ClauseExplosion { cap });
            }
            Ok(out)
        }
        Formula::Or(l, r) => {
            let left = cnf(l, cap)?;
            let right = cnf(r, cap)?;
            if left.len().saturating_mul(right.len()) > cap {
                return Err(NormalizeError::ClauseExplosion { cap });
            }
            let mut out = Vec::with_capacity(left.len() * right.len());
            for a in &left {
                for b in &right {
                    let mut lits = a.literals.clone();
                    lits.extend(b.literals.iter().cloned());
                    let c = Clause::new(lits).dedup();
                    if !c.is_tautology() {
                        out.push(c);
                    }
                }
            }
            Ok(out)
        }
        other => panic!("unexpected connective in quantifier-free NNF: {other:?}"),
    }
}

/// Clausal form of a sentence with the default clause cap.
pub fn clausify(f: &Formula) -> Result<ClauseSet, NormalizeError> {
    clausify_with_cap(f, DEFAULT_MAX_CLAUSES)
}

pub fn clausify_with_cap(f: &Formula, cap: usize) -> Result<ClauseSet, NormalizeError> {
    let mut sk = Skolemizer::new();
    let matrix = strip_universals(&sk.skolemize(&to_nnf(f)));
    let mut seen = BTreeSet::new();
    let mut next = 0;
    let clauses = cnf(&matrix, cap)?
        .into_iter()
        .map(Clause::dedup)
        .filter(|c| !c.is_tautology())
        .filter(|c| seen.insert(c.clone()))
        .map(|c| c.rename_vars(&mut next, "x"))
        .collect();
    Ok(ClauseSet {
        clauses,
        skolem_counter: sk.counter,
    })
}

/// Reflexivity, symmetry, transitivity and one substitution clause per
/// argument position of every function and predicate in `sig`.
pub fn equality_axioms(sig: &Signature) -> ClauseSet {
    let v = |n: &str| Term::var(n);
    let eq = |a: Term, b: Term| Atom::equality(a, b);
    let mut clauses = vec![
        Clause::new(vec![Literal::pos(eq(v("x"), v("x")))]),
        Clause::new(vec![Literal::neg(eq(v("x"), v("y"))), Literal::pos(eq(v("y"), v("x")))]),
        Clause::new(vec![
            Literal::neg(eq(v("x"), v("y"))),
            Literal::neg(eq(v("y"), v("z"))),
            Literal::pos(eq(v("x"), v("z"))),
        ]),
    ];
    let args_with = |arity: usize, pos: usize, at: Term| -> Vec<Term> {
        (0..arity)
            .map(|i| if i == pos { at.clone() } else { Term::Var(format!("z{}", i + 1)) })
            .collect()
    };
    for (g, &arity) in &sig.functions {
        for pos in 0..arity {
            clauses.push(Clause::new(vec![
                Literal::neg(eq(v("x"), v("y"))),
                Literal::pos(eq(
                    Term::App(g.clone(), args_with(arity, pos, v("x"))),
                    Term::App(g.clone(), args_with(arity, pos, v("y"))),
                )),
            ]));
        }
    }
    for (p, &arity) in &sig.predicates {
        for pos in 0..arity {
            clauses.push(Clause::new(vec![
                Literal::neg(eq(v("x"), v("y"))),
                Literal::neg(Atom::new(p, args_with(arity, pos, v("x")))),
                Literal::pos(Atom::new(p, args_with(arity, pos, v("y")))),
            ]));
        }
    }
    ClauseSet {
        clauses,
        skolem_counter: 0,
    }
}
