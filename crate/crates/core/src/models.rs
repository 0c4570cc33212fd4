//! Exhaustive finite-model search.
//!
//! Interpretations are enumerated by increasing domain size. Constant
//! assignments are generated in restricted-growth order (the i-th constant
//! maps to at most one more than the largest element used so far), which
//! visits one representative of every isomorphism class of constant
//! placements; function and predicate tables are enumerated in full.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::semantics::{FunctionTable, Interpretation, Relation};
use crate::stop::StopToken;
use crate::syntax::{Formula, Signature, Term};

/// Default bound on the number of interpretations examined per domain size.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("{count} interpretations of size {domain_size} exceed the enumeration cap of {cap}")]
    SearchSpaceTooLarge {
        domain_size: usize,
        count: u128,
        cap: u128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    Found(Interpretation),
    /// No model exists up to the requested domain size.
    NoneFound,
    /// The stop token fired before the search finished.
    Interrupted,
}

#[derive(Debug, Clone)]
pub struct EnumerationLimits {
    pub max_domain: usize,
    pub cap: u128,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_domain: 4,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Searches for an interpretation of size at most `max_domain` satisfying `f`.
pub fn enumerate_models(
    f: &Formula,
    sig: &Signature,
    max_domain: usize,
) -> Result<Option<Interpretation>, EnumerationError> {
    let limits = EnumerationLimits {
        max_domain,
        ..EnumerationLimits::default()
    };
    match enumerate_models_with(f, sig, &limits, &StopToken::unbounded())? {
        Enumeration::Found(i) => Ok(Some(i)),
        _ => Ok(None),
    }
}

pub fn enumerate_models_with(
    f: &Formula,
    sig: &Signature,
    limits: &EnumerationLimits,
    stop: &StopToken,
) -> Result<Enumeration, EnumerationError> {
    // only symbols that occur in f influence its truth value
    let used = Signature::of_formula(f);
    let program = Program::compile(f, &used);
    for n in 1..=limits.max_domain {
        let count = program.count(n);
        if count > limits.cap {
            return Err(EnumerationError::SearchSpaceTooLarge {
                domain_size: n,
                count,
                cap: limits.cap,
            });
        }
        match program.search(n, stop) {
            Search::Found(mut interp) => {
                extend_to(&mut interp, sig);
                return Ok(Enumeration::Found(interp));
            }
            Search::Exhausted => {}
            Search::Interrupted => return Ok(Enumeration::Interrupted),
        }
    }
    Ok(Enumeration::NoneFound)
}

/// Truth of a sentence in `interp` using the compiled evaluator; `None`
/// when a symbol of `f` is unmapped.
pub fn holds_in(f: &Formula, interp: &Interpretation) -> Option<bool> {
    let program = Program::compile(f, &Signature::of_formula(f));
    let n = interp.domain_size;
    let consts = program
        .constants
        .iter()
        .map(|c| interp.constants.get(c).copied())
        .collect::<Option<Vec<usize>>>()?;
    let (_, fn_offsets, pred_offsets) = program.layout(n);
    let mut digits = Vec::new();
    for (g, _) in &program.functions {
        digits.extend(&interp.functions.get(g)?.values);
    }
    for (p, _) in &program.predicates {
        digits.extend(interp.predicates.get(p)?.holds.iter().map(|&h| h as usize));
    }
    let model = Model {
        n,
        consts: &consts,
        digits: &digits,
        fn_offsets: &fn_offsets,
        pred_offsets: &pred_offsets,
    };
    Some(model.eval(&program.form, &mut vec![0; program.slots]))
}

/// Adds default meanings for signature symbols the search did not touch.
fn extend_to(interp: &mut Interpretation, sig: &Signature) {
    let n = interp.domain_size;
    for c in &sig.constants {
        interp.constants.entry(c.clone()).or_insert(0);
    }
    for (g, &arity) in &sig.functions {
        interp.functions.entry(g.clone()).or_insert_with(|| FunctionTable {
            arity,
            values: vec![0; n.pow(arity as u32)],
        });
    }
    for (p, &arity) in &sig.predicates {
        interp
            .predicates
            .entry(p.clone())
            .or_insert_with(|| Relation::empty(arity, n));
    }
}

enum CTerm {
    Var(usize),
    Const(usize),
    App(usize, Vec<CTerm>),
}

enum CForm {
    Atom(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CForm>),
    And(Box<CForm>, Box<CForm>),
    Or(Box<CForm>, Box<CForm>),
    Implies(Box<CForm>, Box<CForm>),
    Iff(Box<CForm>, Box<CForm>),
    ForAll(usize, Box<CForm>),
    Exists(usize, Box<CForm>),
}

/// A formula compiled to index-addressed symbols and variable slots.
struct Program {
    form: CForm,
    slots: usize,
    constants: Vec<String>,
    functions: Vec<(String, usize)>,
    predicates: Vec<(String, usize)>,
}

struct Compiler<'a> {
    sig: &'a Signature,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn index_of<'k, V>(map: &'k BTreeMap<String, V>, name: &str) -> usize {
        map.keys().position(|k| k == name).expect("symbol collected from formula")
    }

    fn term(&self, t: &Term) -> CTerm {
        match t {
            Term::Var(x) => {
                let slot = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(v, _)| v == x)
                    .map(|&(_, s)| s)
                    .expect("enumeration requires a sentence");
                CTerm::Var(slot)
            }
            Term::Const(c) => {
                CTerm::Const(self.sig.constants.iter().position(|k| k == c).expect("collected"))
            }
            Term::App(g, args) => CTerm::App(
                Self::index_of(&self.sig.functions, g),
                args.iter().map(|a| self.term(a)).collect(),
            ),
        }
    }

    fn formula(&mut self, f: &Formula) -> CForm {
        let b = |c: &mut Self, g: &Formula| Box::new(c.formula(g));
        match f {
            Formula::Atom(p, args) => CForm::Atom(
                Self::index_of(&self.sig.predicates, p),
                args.iter().map(|a| self.term(a)).collect(),
            ),
            Formula::Eq(l, r) => CForm::Eq(self.term(l), self.term(r)),
            Formula::Not(g) => CForm::Not(b(self, g)),
            Formula::And(l, r) => CForm::And(b(self, l), b(self, r)),
            Formula::Or(l, r) => CForm::Or(b(self, l), b(self, r)),
            Formula::Implies(l, r) => CForm::Implies(b(self, l), b(self, r)),
            Formula::Iff(l, r) => CForm::Iff(b(self, l), b(self, r)),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let body = b(self, body);
                self.scope.pop();
                if matches!(f, Formula::ForAll(..)) {
                    CForm::ForAll(slot, body)
                } else {
                    CForm::Exists(slot, body)
                }
            }
        }
    }
}

enum Search {
    Found(Interpretation),
    Exhausted,
    Interrupted,
}

/// Flat view of one candidate interpretation.
struct Model<'a> {
    n: usize,
    consts: &'a [usize],
    // digits hold function values followed by predicate bits
    digits: &'a [usize],
    fn_offsets: &'a [usize],
    pred_offsets: &'a [usize],
}

impl Model<'_> {
    fn term(&self, t: &CTerm, env: &[usize]) -> usize {
        match t {
            CTerm::Var(s) => env[*s],
            CTerm::Const(c) => self.consts[*c],
            CTerm::App(g, args) => {
                let idx = args.iter().fold(0, |acc, a| acc * self.n + self.term(a, env));
                self.digits[self.fn_offsets[*g] + idx]
            }
        }
    }

    fn eval(&self, f: &CForm, env: &mut [usize]) -> bool {
        match f {
            CForm::Atom(p, args) => {
                let idx = args.iter().fold(0, |acc, a| acc * self.n + self.term(a, env));
                self.digits[self.pred_offsets[*p] + idx] == 1
            }
            CForm::Eq(l, r) => self.term(l, env) == self.term(r, env),
            CForm::Not(g) => !self.eval(g, env),
            CForm::And(l, r) => self.eval(l, env) && self.eval(r, env),
            CForm::Or(l, r) => self.eval(l, env) || self.eval(r, env),
            CForm::Implies(l, r) => !self.eval(l, env) || self.eval(r, env),
            CForm::Iff(l, r) => self.eval(l, env) == self.eval(r, env),
            CForm::ForAll(s, body) => (0..self.n).all(|d| {
                env[*s] = d;
                self.eval(body, env)
            }),
            CForm::Exists(s, body) => (0..self.n).any(|d| {
                env[*s] = d;
                self.eval(body, env)
            }),
        }
    }
}

/// Restricted-growth strings of length `len` over `0..n`.
fn constant_placements(len: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, len: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let bound = prefix.iter().max().map_or(0, |m| m + 1).min(n - 1);
        for v in 0..=bound {
            prefix.push(v);
            go(prefix, len, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), len, n, &mut out);
    out
}

impl Program {
    fn compile(f: &Formula, sig: &Signature) -> Program {
        let mut c = Compiler {
            sig,
            scope: Vec::new(),
            slots: 0,
        };
        let form = c.formula(f);
        Program {
            form,
            slots: c.slots,
            constants: sig.constants.iter().cloned().collect(),
            functions: sig.functions.iter().map(|(k, &v)| (k.clone(), v)).collect(),
            predicates: sig.predicates.iter().map(|(k, &v)| (k.clone(), v)).collect(),
        }
    }

    fn layout(&self, n: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let mut radix = Vec::new();
        let mut fn_offsets = Vec::new();
        for (_, arity) in &self.functions {
            fn_offsets.push(radix.len());
            radix.extend(std::iter::repeat_n(n, n.pow(*arity as u32)));
        }
        let mut pred_offsets = Vec::new();
        for (_, arity) in &self.predicates {
            pred_offsets.push(radix.len());
            radix.extend(std::iter::repeat_n(2, n.pow(*arity as u32)));
        }
        (radix, fn_offsets, pred_offsets)
    }

    /// Number of interpretations visited at domain size `n`, saturating.
    fn count(&self, n: usize) -> u128 {
        let placements = constant_placements_count(self.constants.len(), n);
        let (radix, _, _) = self.layout(n);
        radix
            .iter()
            .try_fold(placements, |acc, &r| acc.checked_mul(r as u128))
            .unwrap_or(u128::MAX)
    }

    fn search(&self, n: usize, stop: &StopToken) -> Search {
        let (radix, fn_offsets, pred_offsets) = self.layout(n);
        let mut env = vec![0; self.slots];
        let mut steps: u64 = 0;
        for consts in constant_placements(self.constants.len(), n) {
            let mut digits = vec![0; radix.len()];
            loop {
                steps += 1;
                if steps % 2048 == 0 && stop.should_stop() {
                    return Search::Interrupted;
                }
                let model = Model {
                    n,
                    consts: &consts,
                    digits: &digits,
                    fn_offsets: &fn_offsets,
                    pred_offsets: &pred_offsets,
                };
                if model.eval(&self.form, &mut env) {
                    return Search::Found(self.materialize(n, &consts, &digits, &fn_offsets, &pred_offsets));
                }
                // odometer increment
                let mut i = 0;
                loop {
                    if i == digits.len() {
                        break;
                    }
                    digits[i] += 1;
                    if digits[i] < radix[i] {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == digits.len() {
                    break;
                }
            }
        }
        Search::Exhausted
    }

    fn materialize(
        &self,
        n: usize,
        consts: &[usize],
        digits: &[usize],
        fn_offsets: &[usize],
        pred_offsets: &[usize],
    ) -> Interpretation {
        let constants = self.constants.iter().cloned().zip(consts.iter().copied()).collect();
        let functions = self
            .functions
            .iter()
            .zip(fn_offsets)
            .map(|((name, arity), &off)| {
                let len = n.pow(*arity as u32);
                let values = digits[off..off + len].to_vec();
                (name.clone(), FunctionTable { arity: *arity, values })
            })
            .collect();
        let predicates = self
            .predicates
            .iter()
            .zip(pred_offsets)
            .map(|((name, arity), &off)| {
                let len = n.pow(*arity as u32);
                let holds = digits[off..off + len].iter().map(|&d| d == 1).collect();
                (name.clone(), Relation { arity: *arity, holds })
            })
            .collect();
        Interpretation {
            domain_size: n,
            constants,
            functions,
            predicates,
        }
    }
}

fn constant_placements_count(len: usize, n: usize) -> u128 {
    // number of restricted-growth strings of length len using at most n blocks
    // dp[k] = strings whose max+1 == k
    let mut dp = vec![0u128; n + 1];
    dp[0] = 1;
    for _ in 0..len {
        let mut next = vec![0u128; n + 1];
        for (k, &ways) in dp.iter().enumerate() {
            if ways == 0 {
                continue;
            }
            next[k] += ways * k as u128;
            if k < n {
                next[k + 1] += ways;
            }
        }
        dp = next;
    }
    dp.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::semantics::evaluate_sentence;

    #[test]
    fn placements_are_restricted_growth() {
        assert_eq!(constant_placements(2, 3), vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(constant_placements(3, 3).len(), 5);
        assert_eq!(constant_placements(3, 2).len(), 4);
        for len in 0..5 {
            for n in 1..5 {
                assert_eq!(
                    constant_placements(len, n).len() as u128,
                    constant_placements_count(len, n)
                );
            }
        }
    }

    #[test]
    fn single_fact_has_one_element_model() {
        let sig = Signature::new().with_constants(["Joe"]).with_predicate("P", 1);
        let f = parse("P(Joe)", &sig).unwrap();
        let m = enumerate_models(&f, &sig, 1).unwrap().unwrap();
        assert_eq!(m.domain_size, 1);
        assert!(evaluate_sentence(&f, &m).unwrap());
    }

    #[test]
    fn self_disequality_is_unsatisfiable() {
        let sig = Signature::new();
        let f = parse("exists x x != x", &sig).unwrap();
        assert_eq!(enumerate_models(&f, &sig, 4).unwrap(), None);
    }

    #[test]
    fn finds_model_needing_two_elements() {
        let sig = Signature::new().with_predicate("P", 1);
        let f = parse("(exists x P(x)) & exists y -P(y)", &sig).unwrap();
        let m = enumerate_models(&f, &sig, 3).unwrap().unwrap();
        assert_eq!(m.domain_size, 2);
    }

    #[test]
    fn functions_are_enumerated() {
        let sig = Signature::new().with_function("F", 1).with_constants(["A"]);
        let f = parse("F(A) != A & F(F(A)) = A", &sig).unwrap();
        let m = enumerate_models(&f, &sig, 3).unwrap().unwrap();
        assert_eq!(m.domain_size, 2);
        assert!(evaluate_sentence(&f, &m).unwrap());
    }

    #[test]
    fn model_covers_whole_signature() {
        let sig = Signature::new()
            .with_constants(["Joe", "Other"])
            .with_function("G", 2)
            .with_predicate("P", 1)
            .with_predicate("R", 3);
        let f = parse("P(Joe)", &sig).unwrap();
        let m = enumerate_models(&f, &sig, 2).unwrap().unwrap();
        assert!(m.validate().is_ok());
        assert!(m.constants.contains_key("Other"));
        assert!(m.functions.contains_key("G"));
        assert!(m.predicates.contains_key("R"));
    }

    #[test]
    fn cap_is_enforced() {
        let sig = Signature::new().with_predicate("R", 3);
        let f = parse("exists x exists y (R(x,y,x) & -R(y,x,y) & x != y) & all x R(x,x,x) & exists x exists y exists z (x != y & y != z & x != z & -R(x,y,z))", &sig).unwrap();
        let limits = EnumerationLimits { max_domain: 4, cap: 1 << 20 };
        let res = enumerate_models_with(&f, &sig, &limits, &StopToken::unbounded());
        assert!(matches!(
            res,
            Err(EnumerationError::SearchSpaceTooLarge { domain_size: 3, .. })
        ));
    }

    #[test]
    fn stop_token_interrupts() {
        let sig = Signature::new().with_predicate("R", 2);
        let f = parse("exists x x != x", &sig).unwrap();
        let g = Formula::and(f, parse("all x all y (R(x,y) | -R(x,y))", &sig).unwrap());
        let stop = StopToken::after(std::time::Duration::ZERO);
        let res = enumerate_models_with(&g, &sig, &EnumerationLimits::default(), &stop).unwrap();
        assert_eq!(res, Enumeration::Interrupted);
    }
}
