//! Given-clause resolution prover.
//!
//! Binary resolution plus factoring, with forward subsumption and tautology
//! deletion. Equality is handled by adding the equality axioms for the
//! symbols of the input whenever an equality literal occurs.

use std::collections::BTreeSet;
use std::fmt;

use crate::normalize::{equality_axioms, Clause, ClauseSet, Literal};
use crate::stop::StopToken;
use crate::unify::{subsumes, unify_atoms, Substitution};

pub const DEFAULT_MAX_CLAUSES: usize = 100_000;

/// Every `AGE_PICK`-th given clause is the oldest one rather than the lightest.
const AGE_PICK: usize = 5;

#[derive(Debug, Clone)]
pub struct Budget {
    pub stop: StopToken,
    pub max_clauses: usize,
}

impl Budget {
    pub fn new(stop: StopToken) -> Self {
        Budget {
            stop,
            max_clauses: DEFAULT_MAX_CLAUSES,
        }
    }

    pub fn with_max_clauses(mut self, max_clauses: usize) -> Self {
        self.max_clauses = max_clauses;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExceededReason {
    ClauseLimit,
    Deadline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Input,
    EqualityAxiom,
    Resolution {
        left: usize,
        right: usize,
        unifier: Substitution,
    },
    Factoring {
        parent: usize,
        unifier: Substitution,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceRecord {
    pub id: usize,
    pub clause: Clause,
    pub rule: Rule,
}

impl fmt::Display for InferenceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::Input => write!(f, "{} {}.  [input]", self.id, self.clause),
            Rule::EqualityAxiom => write!(f, "{} {}.  [equality]", self.id, self.clause),
            Rule::Resolution { left, right, unifier } => write!(
                f,
                "{} {}.  [resolve({left},{right}) {unifier}]",
                self.id, self.clause
            ),
            Rule::Factoring { parent, unifier } => {
                write!(f, "{} {}.  [factor({parent}) {unifier}]", self.id, self.clause)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofResult {
    /// Derivation of the empty clause, ancestors first.
    Refuted(Vec<InferenceRecord>),
    /// No inference is left; the clause set is satisfiable.
    Saturated,
    BudgetExceeded(ExceededReason),
}

impl ProofResult {
    pub fn is_refuted(&self) -> bool {
        matches!(self, ProofResult::Refuted(_))
    }
}

struct Node {
    clause: Clause,
    rule: Rule,
    weight: usize,
}

struct Prover<'b> {
    nodes: Vec<Node>,
    passive_by_weight: BTreeSet<(usize, usize)>,
    passive_by_age: BTreeSet<usize>,
    active: Vec<usize>,
    next_var: usize,
    budget: &'b Budget,
    selections: usize,
}

enum Outcome {
    Continue,
    Empty(usize),
    Exceeded(ExceededReason),
}

impl Prover<'_> {
    /// Stores a new clause unless it is redundant.
    fn add(&mut self, clause: Clause, rule: Rule) -> Outcome {
        let clause = clause.dedup();
        if clause.is_tautology() {
            return Outcome::Continue;
        }
        if self
            .active
            .iter()
            .any(|&a| subsumes(&self.nodes[a].clause, &clause))
        {
            return Outcome::Continue;
        }
        let clause = clause.rename_vars(&mut self.next_var, "v");
        let id = self.nodes.len();
        let weight = clause.weight();
        let empty = clause.is_empty();
        self.nodes.push(Node { clause, rule, weight });
        if empty {
            return Outcome::Empty(id);
        }
        if self.nodes.len() > self.budget.max_clauses {
            return Outcome::Exceeded(ExceededReason::ClauseLimit);
        }
        self.passive_by_weight.insert((weight, id));
        self.passive_by_age.insert(id);
        Outcome::Continue
    }

    fn select(&mut self) -> Option<usize> {
        self.selections += 1;
        let id = if self.selections % AGE_PICK == 0 {
            *self.passive_by_age.first()?
        } else {
            self.passive_by_weight.first()?.1
        };
        self.passive_by_age.remove(&id);
        self.passive_by_weight.remove(&(self.nodes[id].weight, id));
        Some(id)
    }

    fn factors(&self, id: usize) -> Vec<(Clause, Rule)> {
        let lits = &self.nodes[id].clause.literals;
        let mut out = Vec::new();
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                if lits[i].positive != lits[j].positive {
                    continue;
                }
                if let Some(s) = unify_atoms(&lits[i].atom, &lits[j].atom) {
                    let kept = lits
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, l)| s.apply_literal(l))
                        .collect();
                    out.push((Clause::new(kept), Rule::Factoring { parent: id, unifier: s }));
                }
            }
        }
        out
    }

    fn resolvents(&mut self, given: usize, other: usize) -> Vec<(Clause, Rule)> {
        let left = self.nodes[given].clause.clone();
        // variables of stored clauses are globally distinct except for self-resolution
        let right = if given == other {
            left.rename_vars(&mut self.next_var, "v")
        } else {
            self.nodes[other].clause.clone()
        };
        let mut out = Vec::new();
        for (i, a) in left.literals.iter().enumerate() {
            for (j, b) in right.literals.iter().enumerate() {
                if a.positive == b.positive {
                    continue;
                }
                let Some(s) = unify_atoms(&a.atom, &b.atom) else {
                    continue;
                };
                let lits: Vec<Literal> = left
                    .literals
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, l)| s.apply_literal(l))
                    .chain(
                        right
                            .literals
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, l)| s.apply_literal(l)),
                    )
                    .collect();
                out.push((
                    Clause::new(lits),
                    Rule::Resolution {
                        left: given,
                        right: other,
                        unifier: s,
                    },
                ));
            }
        }
        out
    }

    fn proof(&self, empty: usize) -> Vec<InferenceRecord> {
        let mut needed = BTreeSet::new();
        let mut stack = vec![empty];
        while let Some(id) = stack.pop() {
            if !needed.insert(id) {
                continue;
            }
            match &self.nodes[id].rule {
                Rule::Resolution { left, right, .. } => {
                    stack.push(*left);
                    stack.push(*right);
                }
                Rule::Factoring { parent, .. } => stack.push(*parent),
                Rule::Input | Rule::EqualityAxiom => {}
            }
        }
        needed
            .into_iter()
            .map(|id| InferenceRecord {
                id,
                clause: self.nodes[id].clause.clone(),
                rule: self.nodes[id].rule.clone(),
            })
            .collect()
    }

    fn run(&mut self) -> ProofResult {
        loop {
            if self.budget.stop.should_stop() {
                return ProofResult::BudgetExceeded(ExceededReason::Deadline);
            }
            let Some(given) = self.select() else {
                return ProofResult::Saturated;
            };
            let given_clause = &self.nodes[given].clause;
            if self
                .active
                .iter()
                .any(|&a| subsumes(&self.nodes[a].clause, given_clause))
            {
                continue;
            }
            let mut fresh = self.factors(given);
            self.active.push(given);
            let partners = self.active.clone();
            for (n, other) in partners.into_iter().enumerate() {
                if n % 64 == 63 && self.budget.stop.should_stop() {
                    return ProofResult::BudgetExceeded(ExceededReason::Deadline);
                }
                fresh.extend(self.resolvents(given, other));
            }
            for (clause, rule) in fresh {
                match self.add(clause, rule) {
                    Outcome::Continue => {}
                    Outcome::Empty(id) => return ProofResult::Refuted(self.proof(id)),
                    Outcome::Exceeded(r) => return ProofResult::BudgetExceeded(r),
                }
            }
        }
    }
}

/// Searches for a refutation of `cs` within `budget`.
pub fn refute(cs: &ClauseSet, budget: &Budget) -> ProofResult {
    let mut prover = Prover {
        nodes: Vec::new(),
        passive_by_weight: BTreeSet::new(),
        passive_by_age: BTreeSet::new(),
        active: Vec::new(),
        next_var: 0,
        budget,
        selections: 0,
    };
    let axioms = if cs.has_equality() {
        equality_axioms(&cs.signature()).clauses
    } else {
        Vec::new()
    };
    let inputs = cs
        .clauses
        .iter()
        .map(|c| (c.clone(), Rule::Input))
        .chain(axioms.into_iter().map(|c| (c, Rule::EqualityAxiom)));
    for (clause, rule) in inputs {
        match prover.add(clause, rule) {
            Outcome::Continue => {}
            Outcome::Empty(id) => return ProofResult::Refuted(prover.proof(id)),
            Outcome::Exceeded(r) => return ProofResult::BudgetExceeded(r),
        }
    }
    prover.run()
}
