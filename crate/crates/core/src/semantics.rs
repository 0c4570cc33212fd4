//! Finite interpretations and Tarskian evaluation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{Formula, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("symbol `{0}` is not mapped by the interpretation")]
    UnmappedSymbol(String),
    #[error("variable `{0}` has no value in the environment")]
    UnboundVariable(String),
    #[error("table for `{0}` does not match the domain size or arity")]
    MalformedTable(String),
}

/// Row-major index of an argument tuple into a table over `domain^arity`.
pub fn tuple_index(args: &[usize], domain_size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * domain_size + a)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(mut index: usize, arity: usize, domain_size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % domain_size;
        index /= domain_size;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    /// One entry per tuple, indexed by [`tuple_index`].
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    /// One flag per tuple, indexed by [`tuple_index`].
    pub holds: Vec<bool>,
}

impl Relation {
    pub fn empty(arity: usize, domain_size: usize) -> Self {
        Relation {
            arity,
            holds: vec![false; domain_size.pow(arity as u32)],
        }
    }
}

/// A structure over the domain `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub domain_size: usize,
    pub constants: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, FunctionTable>,
    pub predicates: BTreeMap<String, Relation>,
}

impl Interpretation {
    /// Everything maps to element 0 and every relation is empty.
    pub fn trivial(sig: &Signature, domain_size: usize) -> Self {
        assert!(domain_size > 0, "domain must be non-empty");
        Interpretation {
            domain_size,
            constants: sig.constants.iter().map(|c| (c.clone(), 0)).collect(),
            functions: sig
                .functions
                .iter()
                .map(|(f, &arity)| {
                    let values = vec![0; domain_size.pow(arity as u32)];
                    (f.clone(), FunctionTable { arity, values })
                })
                .collect(),
            predicates: sig
                .predicates
                .iter()
                .map(|(p, &arity)| (p.clone(), Relation::empty(arity, domain_size)))
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let n = self.domain_size;
        for (c, &v) in &self.constants {
            if v >= n {
                return Err(EvalError::MalformedTable(c.clone()));
            }
        }
        for (f, t) in &self.functions {
            if t.values.len() != n.pow(t.arity as u32) || t.values.iter().any(|&v| v >= n) {
                return Err(EvalError::MalformedTable(f.clone()));
            }
        }
        for (p, r) in &self.predicates {
            if r.holds.len() != n.pow(r.arity as u32) {
                return Err(EvalError::MalformedTable(p.clone()));
            }
        }
        Ok(())
    }

    pub fn set_predicate(&mut self, name: &str, args: &[usize], value: bool) {
        let n = self.domain_size;
        let rel = self
            .predicates
            .entry(name.to_string())
            .or_insert_with(|| Relation::empty(args.len(), n));
        rel.holds[tuple_index(args, n)] = value;
    }

    pub fn value_of(&self, t: &Term, env: &BTreeMap<String, usize>) -> Result<usize, EvalError> {
        match t {
            Term::Var(x) => env.get(x).copied().ok_or_else(|| EvalError::UnboundVariable(x.clone())),
            Term::Const(c) => self
                .constants
                .get(c)
                .copied()
                .ok_or_else(|| EvalError::UnmappedSymbol(c.clone())),
            Term::App(f, args) => {
                let table = self
                    .functions
                    .get(f)
                    .filter(|t| t.arity == args.len())
                    .ok_or_else(|| EvalError::UnmappedSymbol(f.clone()))?;
                let vals = args
                    .iter()
                    .map(|a| self.value_of(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(table.values[tuple_index(&vals, self.domain_size)])
            }
        }
    }

    pub fn holds(&self, pred: &str, args: &[usize]) -> Result<bool, EvalError> {
        let rel = self
            .predicates
            .get(pred)
            .filter(|r| r.arity == args.len())
            .ok_or_else(|| EvalError::UnmappedSymbol(pred.to_string()))?;
        Ok(rel.holds[tuple_index(args, self.domain_size)])
    }
}

/// Truth value of `f` in `interp` under `env`; quantifiers range over the whole domain.
pub fn evaluate(
    f: &Formula,
    interp: &Interpretation,
    env: &BTreeMap<String, usize>,
) -> Result<bool, EvalError> {
    let mut env = env.clone();
    eval_in(f, interp, &mut env)
}

/// Evaluates a sentence under the empty environment.
pub fn evaluate_sentence(f: &Formula, interp: &Interpretation) -> Result<bool, EvalError> {
    evaluate(f, interp, &BTreeMap::new())
}

fn eval_in(
    f: &Formula,
    interp: &Interpretation,
    env: &mut BTreeMap<String, usize>,
) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Atom(p, args) => {
            let vals = args
                .iter()
                .map(|a| interp.value_of(a, env))
                .collect::<Result<Vec<_>, _>>()?;
            interp.holds(p, &vals)?
        }
        Formula::Eq(l, r) => interp.value_of(l, env)? == interp.value_of(r, env)?,
        Formula::Not(g) => !eval_in(g, interp, env)?,
        Formula::And(l, r) => eval_in(l, interp, env)? && eval_in(r, interp, env)?,
        Formula::Or(l, r) => eval_in(l, interp, env)? || eval_in(r, interp, env)?,
        Formula::Implies(l, r) => !eval_in(l, interp, env)? || eval_in(r, interp, env)?,
        Formula::Iff(l, r) => eval_in(l, interp, env)? == eval_in(r, interp, env)?,
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::ForAll(..));
            let saved = env.get(v).copied();
            let mut result = universal;
            for d in 0..interp.domain_size {
                env.insert(v.clone(), d);
                let b = match eval_in(body, interp, env) {
                    Ok(b) => b,
                    Err(e) => {
                        restore(env, v, saved);
                        return Err(e);
                    }
                };
                if b != universal {
                    result = b;
                    break;
                }
            }
            restore(env, v, saved);
            result
        }
    })
}

fn restore(env: &mut BTreeMap<String, usize>, v: &str, saved: Option<usize>) {
    match saved {
        Some(d) => env.insert(v.to_string(), d),
        None => env.remove(v),
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn lawyer_sig() -> Signature {
        Signature::new()
            .with_constants(["Joe", "Lawyer"])
            .with_predicate("Occupation", 2)
            .with_predicate("Customer", 2)
    }

    /// Joe=0, Lawyer=1, B=2, C=3 with the two-lawyer situation.
    fn two_lawyers() -> Interpretation {
        let mut i = Interpretation::trivial(&lawyer_sig(), 4);
        i.constants.insert("Lawyer".into(), 1);
        i.set_predicate("Occupation", &[2, 1], true);
        i.set_predicate("Occupation", &[3, 1], true);
        i.set_predicate("Customer", &[0, 3], true);
        i
    }

    #[test]
    fn lawyer_countermodel_separates_answers() {
        let sig = lawyer_sig();
        let a = parse("-(exists x (Occupation(x,Lawyer) & Customer(Joe,x)))", &sig).unwrap();
        let s = parse("exists x (Occupation(x,Lawyer) & -Customer(Joe,x))", &sig).unwrap();
        let i = two_lawyers();
        assert!(evaluate_sentence(&s, &i).unwrap());
        assert!(!evaluate_sentence(&a, &i).unwrap());
        assert!(!evaluate_sentence(&Formula::iff(a, s), &i).unwrap());
    }

    #[test]
    fn surgeon_answer_true_when_surgeons_are_doctors() {
        let sig = Signature::new()
            .with_constants(["Doctor", "Surgeon"])
            .with_predicate("Occupation", 2);
        let m = parse("all x (Occupation(x,Surgeon) -> Occupation(x,Doctor))", &sig).unwrap();
        let mut i = Interpretation::trivial(&sig, 3);
        i.constants.insert("Surgeon".into(), 1);
        i.constants.insert("Doctor".into(), 2);
        i.set_predicate("Occupation", &[0, 1], true);
        i.set_predicate("Occupation", &[0, 2], true);
        assert!(evaluate_sentence(&m, &i).unwrap());
        i.set_predicate("Occupation", &[0, 2], false);
        assert!(!evaluate_sentence(&m, &i).unwrap());
    }

    #[test]
    fn reflexive_equality() {
        let sig = lawyer_sig();
        let f = parse("Joe = Joe", &sig).unwrap();
        for n in 1..4 {
            assert!(evaluate_sentence(&f, &Interpretation::trivial(&sig, n)).unwrap());
        }
    }

    #[test]
    fn unmapped_symbol_is_an_error() {
        let f = Formula::atom("Nope", vec![Term::constant("Joe")]);
        let err = evaluate_sentence(&f, &Interpretation::trivial(&lawyer_sig(), 1)).unwrap_err();
        assert_eq!(err, EvalError::UnmappedSymbol("Nope".into()));
    }

    #[test]
    fn environment_is_restored_after_quantifier() {
        let sig = Signature::new().with_predicate("P", 1);
        let mut i = Interpretation::trivial(&sig, 2);
        i.set_predicate("P", &[1], true);
        let f = Formula::and(
            Formula::exists("x", Formula::atom("P", vec![Term::var("x")])),
            Formula::atom("P", vec![Term::var("x")]),
        );
        let env = BTreeMap::from([("x".to_string(), 0)]);
        assert!(!evaluate(&f, &i, &env).unwrap());
    }

    #[test]
    fn tuple_index_round_trip() {
        for idx in 0..27 {
            assert_eq!(tuple_index(&tuple_at(idx, 3, 3), 3), idx);
        }
    }
}
