//! Ground analytic tableau for countermodel search.
//!
//! The tableau starts from the negation normal form of `-f` and expands
//! branches depth first: conjunctions and literals first, then existentials
//! (each introduces a fresh witness constant), then disjunctions, and
//! finally universals, which are instantiated with ground terms already on
//! the branch. Branches close on `t != t` or complementary atoms, modulo
//! congruence closure of the branch equalities. Universal instantiations per
//! formula are bounded and the bound is deepened from zero, so the smallest
//! models are tried first. An open branch is turned into an interpretation
//! and kept only if evaluation confirms that `f` is false in it.

use std::cell::Cell;
use std::rc::Rc;
use std::collections::{BTreeSet, VecDeque};

use crate::congruence::CongruenceClosure;
use crate::countermodel::{next_witness_name, presentable, Countermodel};
use crate::models::{holds_in, DEFAULT_ENUMERATION_CAP};
use crate::normalize::{to_nnf, Atom, Literal};
use crate::semantics::{tuple_index, Interpretation};
use crate::stop::StopToken;
use crate::syntax::{Formula, Signature, Term};

pub const DEFAULT_MAX_STEPS: usize = 5_000;

#[derive(Debug, Clone)]
pub struct TableauBudget {
    pub stop: StopToken,
    /// Instantiations allowed per universal formula per branch.
    pub max_gamma_instantiations: usize,
    /// Largest domain tried by the enumeration fallback.
    pub max_domain_size: usize,
    pub enumeration_cap: u128,
    /// Formula expansions allowed across all deepening rounds.
    pub max_steps: usize,
}

impl Default for TableauBudget {
    fn default() -> Self {
        TableauBudget {
            stop: StopToken::unbounded(),
            max_gamma_instantiations: 4,
            max_domain_size: 4,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl TableauBudget {
    pub fn with_stop(stop: StopToken) -> Self {
        TableauBudget {
            stop,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableauOutcome {
    /// A certified countermodel read off an open branch.
    Countermodel(Countermodel),
    /// Every branch closed: `f` is valid.
    Closed,
    /// Some branch stayed open without yielding a certified model, or the
    /// step budget ran out.
    Open,
    Interrupted,
}

/// Negation normal form with shared subtrees, so branches copy cheaply.
#[derive(Debug, PartialEq)]
enum Node {
    Lit(Literal),
    And(Rc<Node>, Rc<Node>),
    Or(Rc<Node>, Rc<Node>),
    All(String, Rc<Node>),
    Ex(String, Rc<Node>),
}

impl Node {
    fn from_nnf(f: &Formula) -> Rc<Node> {
        let node = match f {
            Formula::Atom(p, args) => Node::Lit(Literal::pos(Atom::new(p, args.clone()))),
            Formula::Eq(l, r) => Node::Lit(Literal::pos(Atom::equality(l.clone(), r.clone()))),
            Formula::Not(g) => match Node::from_nnf(g).as_ref() {
                Node::Lit(l) if l.positive => Node::Lit(l.negated()),
                _ => panic!("tableau expects negation normal form, got {f}"),
            },
            Formula::And(l, r) => Node::And(Node::from_nnf(l), Node::from_nnf(r)),
            Formula::Or(l, r) => Node::Or(Node::from_nnf(l), Node::from_nnf(r)),
            Formula::ForAll(v, b) => Node::All(v.clone(), Node::from_nnf(b)),
            Formula::Exists(v, b) => Node::Ex(v.clone(), Node::from_nnf(b)),
            Formula::Implies(..) | Formula::Iff(..) => panic!("tableau expects negation normal form, got {f}"),
        };
        Rc::new(node)
    }

    /// Replaces free `v` by the ground term `t`; untouched subtrees are shared.
    fn instantiate(self: &Rc<Self>, v: &str, t: &Term) -> Rc<Node> {
        let rebuilt = match self.as_ref() {
            Node::Lit(l) => {
                if !l.atom.args.iter().any(|a| a.contains_var(v)) {
                    return self.clone();
                }
                Node::Lit(Literal {
                    positive: l.positive,
                    atom: l.atom.map_terms(&|a| a.replace_var(v, t)),
                })
            }
            Node::And(a, b) => Node::And(a.instantiate(v, t), b.instantiate(v, t)),
            Node::Or(a, b) => Node::Or(a.instantiate(v, t), b.instantiate(v, t)),
            Node::All(w, _) | Node::Ex(w, _) if w == v => return self.clone(),
            Node::All(w, b) => Node::All(w.clone(), b.instantiate(v, t)),
            Node::Ex(w, b) => Node::Ex(w.clone(), b.instantiate(v, t)),
        };
        Rc::new(rebuilt)
    }
}

#[derive(Debug, Clone)]
struct Gamma {
    var: String,
    body: Rc<Node>,
    used: Vec<Term>,
}

#[derive(Debug, Clone)]
struct Branch {
    queue: VecDeque<Rc<Node>>,
    betas: VecDeque<(Rc<Node>, Rc<Node>)>,
    literals: Vec<Literal>,
    cc: CongruenceClosure,
    gammas: Vec<Gamma>,
    witnesses: Vec<String>,
    taken: BTreeSet<String>,
}

enum Expansion {
    Found(Countermodel),
    Closed,
    Open,
    Exhausted,
    Interrupted,
}

struct Search<'a> {
    target: &'a Formula,
    sig: &'a Signature,
    display_sig: &'a Signature,
    limit: usize,
    stop: &'a StopToken,
    steps: &'a Cell<usize>,
}

impl Branch {
    fn new_witness(&mut self) -> Term {
        let name = next_witness_name(&self.taken);
        self.taken.insert(name.clone());
        self.witnesses.push(name.clone());
        let t = Term::Const(name);
        self.cc.add_term(&t);
        t
    }

    /// Adds a literal and reports whether the branch is now closed.
    fn add_literal(&mut self, lit: Literal) -> bool {
        if self.literals.contains(&lit) {
            return false;
        }
        for t in &lit.atom.args {
            self.cc.add_term(t);
        }
        let merged = lit.positive
            && lit.atom.is_equality()
            && !self.cc.equivalent(&lit.atom.args[0], &lit.atom.args[1]);
        if merged {
            self.cc.merge(&lit.atom.args[0], &lit.atom.args[1]);
        }
        self.literals.push(lit);
        if merged {
            // classes changed: any pair may now clash
            (0..self.literals.len()).any(|i| self.clashes(i))
        } else {
            self.clashes(self.literals.len() - 1)
        }
    }

    /// Whether literal `i` contradicts the branch modulo congruence.
    fn clashes(&mut self, i: usize) -> bool {
        let l = self.literals[i].clone();
        if l.atom.is_equality() {
            return !l.positive && self.cc.equivalent(&l.atom.args[0], &l.atom.args[1]);
        }
        for j in 0..self.literals.len() {
            let m = &self.literals[j];
            if m.positive == l.positive || m.atom.predicate != l.atom.predicate || m.atom.args.len() != l.atom.args.len() {
                continue;
            }
            let m = m.clone();
            if l.atom.args.iter().zip(&m.atom.args).all(|(a, b)| self.cc.equivalent(a, b)) {
                return true;
            }
        }
        false
    }

    /// Candidate instantiation terms: witnesses newest first, then the
    /// remaining terms in order of appearance.
    fn candidate_terms(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self.witnesses.iter().rev().map(|w| Term::Const(w.clone())).collect();
        for t in self.cc.terms() {
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        out
    }

    fn uncovered(&mut self, g: usize, candidates: &[Term]) -> Option<Term> {
        let used = self.gammas[g].used.clone();
        candidates
            .iter()
            .find(|t| !used.iter().any(|u| self.cc.equivalent(u, t)))
            .cloned()
    }

    /// Next (universal, term) pair: least-used universal first.
    fn next_gamma(&mut self, limit: usize) -> Option<(usize, Term)> {
        if self.gammas.is_empty() || limit == 0 {
            return None;
        }
        if self.cc.terms().is_empty() {
            self.new_witness();
        }
        let candidates = self.candidate_terms();
        let mut order: Vec<usize> = (0..self.gammas.len()).collect();
        order.sort_by_key(|&g| (self.gammas[g].used.len(), g));
        for g in order {
            if self.gammas[g].used.len() >= limit {
                continue;
            }
            if let Some(t) = self.uncovered(g, &candidates) {
                return Some((g, t));
            }
        }
        None
    }
}

impl Search<'_> {
    fn expand(&self, mut b: Branch) -> Expansion {
        loop {
            if self.stop.should_stop() {
                return Expansion::Interrupted;
            }
            while let Some(f) = b.queue.pop_front() {
                if self.steps.get() == 0 {
                    return Expansion::Exhausted;
                }
                self.steps.set(self.steps.get() - 1);
                match f.as_ref() {
                    Node::Lit(lit) => {
                        if b.add_literal(lit.clone()) {
                            return Expansion::Closed;
                        }
                    }
                    Node::And(l, r) => {
                        b.queue.push_back(l.clone());
                        b.queue.push_back(r.clone());
                    }
                    Node::Or(l, r) => b.betas.push_back((l.clone(), r.clone())),
                    Node::Ex(v, body) => {
                        let w = b.new_witness();
                        b.queue.push_back(body.instantiate(v, &w));
                    }
                    Node::All(var, body) => {
                        if !b.gammas.iter().any(|g| g.var == *var && (Rc::ptr_eq(&g.body, body) || g.body == *body)) {
                            b.gammas.push(Gamma {
                                var: var.clone(),
                                body: body.clone(),
                                used: Vec::new(),
                            });
                        }
                    }
                }
            }
            if let Some((l, r)) = b.betas.pop_front() {
                let mut open = false;
                for side in [l, r] {
                    let mut child = b.clone();
                    child.queue.push_back(side);
                    match self.expand(child) {
                        Expansion::Closed => {}
                        Expansion::Open => open = true,
                        done => return done,
                    }
                }
                return if open { Expansion::Open } else { Expansion::Closed };
            }
            match b.next_gamma(self.limit) {
                Some((g, t)) => {
                    b.gammas[g].used.push(t.clone());
                    let inst = b.gammas[g].body.instantiate(&b.gammas[g].var, &t);
                    b.queue.push_back(inst);
                }
                None => {
                    return match self.read_model(&mut b) {
                        Some(cm) => Expansion::Found(cm),
                        None => Expansion::Open,
                    };
                }
            }
        }
    }

    /// Builds the term model of an open branch and certifies it.
    fn read_model(&self, b: &mut Branch) -> Option<Countermodel> {
        if b.cc.terms().is_empty() {
            b.new_witness();
        }
        let terms = b.cc.terms().to_vec();
        let class_ids: Vec<usize> = terms.iter().map(|t| b.cc.class_of(t).expect("registered")).collect();
        let mut classes: Vec<usize> = Vec::new();
        for &c in &class_ids {
            if !classes.contains(&c) {
                classes.push(c);
            }
        }
        let mut named: Vec<(u8, usize, String, usize)> = Vec::new();
        for &c in &classes {
            let members: Vec<&Term> = terms.iter().zip(&class_ids).filter(|(_, &k)| k == c).map(|(t, _)| t).collect();
            let constant = members
                .iter()
                .filter_map(|t| match t {
                    Term::Const(n) if !b.witnesses.contains(n) => Some(n.clone()),
                    _ => None,
                })
                .min();
            let witness = b
                .witnesses
                .iter()
                .position(|w| members.iter().any(|t| matches!(t, Term::Const(n) if n == w)));
            named.push(match (constant, witness) {
                (Some(n), _) => (0, 0, n, c),
                (None, Some(pos)) => (1, pos, b.witnesses[pos].clone(), c),
                (None, None) => (2, 0, members[0].to_string(), c),
            });
        }
        named.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));
        let element_of = |t: &Term| -> usize {
            let c = class_ids[terms.iter().position(|u| u == t).expect("registered")];
            named.iter().position(|e| e.3 == c).expect("class named")
        };

        let full_sig = self.sig.merge(&Signature::of_formula(self.target));
        let mut interp = Interpretation::trivial(&full_sig, named.len());
        for t in &terms {
            match t {
                Term::Const(n) => {
                    interp.constants.insert(n.clone(), element_of(t));
                }
                Term::App(g, args) => {
                    let idx: Vec<usize> = args.iter().map(element_of).collect();
                    let value = element_of(t);
                    if let Some(table) = interp.functions.get_mut(g) {
                        table.values[tuple_index(&idx, named.len())] = value;
                    }
                }
                Term::Var(_) => unreachable!("branch terms are ground"),
            }
        }
        for l in b.literals.iter().filter(|l| l.positive && !l.atom.is_equality()) {
            let idx: Vec<usize> = l.atom.args.iter().map(element_of).collect();
            interp.set_predicate(&l.atom.predicate, &idx, true);
        }
        if holds_in(self.target, &interp) != Some(false) {
            return None;
        }
        let cm = Countermodel {
            domain: named.into_iter().map(|e| e.2).collect(),
            literals: presentable(&b.literals, self.display_sig),
            falsified: self.target.clone(),
            interpretation: interp,
        };
        cm.certify().then_some(cm)
    }
}

/// Runs the tableau on `-f` with iterative deepening of the universal
/// instantiation bound up to `budget.max_gamma_instantiations`.
pub fn tableau_search(f: &Formula, sig: &Signature, budget: &TableauBudget) -> TableauOutcome {
    let root = Node::from_nnf(&to_nnf(&Formula::not(f.clone())));
    let formula_sig = Signature::of_formula(f);
    let display_sig = sig.merge(&formula_sig);
    let taken: BTreeSet<String> = display_sig
        .constants
        .iter()
        .chain(display_sig.functions.keys())
        .chain(display_sig.predicates.keys())
        .cloned()
        .collect();
    let steps = Cell::new(budget.max_steps);
    for limit in 0..=budget.max_gamma_instantiations {
        let search = Search {
            target: f,
            sig,
            display_sig: &display_sig,
            limit,
            stop: &budget.stop,
            steps: &steps,
        };
        let mut cc = CongruenceClosure::new();
        for c in &formula_sig.constants {
            cc.add_term(&Term::Const(c.clone()));
        }
        let branch = Branch {
            queue: VecDeque::from([root.clone()]),
            betas: VecDeque::new(),
            literals: Vec::new(),
            cc,
            gammas: Vec::new(),
            witnesses: Vec::new(),
            taken: taken.clone(),
        };
        match search.expand(branch) {
            Expansion::Found(cm) => return TableauOutcome::Countermodel(cm),
            Expansion::Closed => return TableauOutcome::Closed,
            Expansion::Interrupted => return TableauOutcome::Interrupted,
            Expansion::Exhausted => return TableauOutcome::Open,
            Expansion::Open => {}
        }
    }
    TableauOutcome::Open
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn sig() -> Signature {
        Signature::new()
            .with_constants(["Joe", "Lawyer", "Actor", "Doctor", "Surgeon"])
            .with_predicate("Occupation", 2)
            .with_predicate("Customer", 2)
            .with_predicate("P", 1)
    }

    fn f(text: &str) -> Formula {
        parse(text, &sig()).unwrap()
    }

    fn search(text: &str) -> TableauOutcome {
        tableau_search(&f(text), &sig(), &TableauBudget::default())
    }

    #[test]
    fn tautology_closes() {
        assert_eq!(search("P(Joe) | -P(Joe)"), TableauOutcome::Closed);
        assert_eq!(search("(all x P(x)) -> P(Joe)"), TableauOutcome::Closed);
        assert_eq!(search("all x x = x"), TableauOutcome::Closed);
    }

    #[test]
    fn single_fact_countermodel() {
        let TableauOutcome::Countermodel(cm) = search("P(Joe)") else {
            panic!("expected countermodel");
        };
        assert_eq!(cm.domain, vec!["Joe"]);
        assert_eq!(cm.render(), "domain: Joe\n-P(Joe)\n");
    }

    #[test]
    fn lawyer_countermodel_has_two_witnesses() {
        let text = "-(exists x (Occupation(x,Lawyer) & Customer(Joe,x))) <-> (exists x (Occupation(x,Lawyer) & -Customer(Joe,x)))";
        let TableauOutcome::Countermodel(cm) = search(text) else {
            panic!("expected countermodel");
        };
        assert!(cm.certify());
        let facts: Vec<String> = cm.literals.iter().map(|l| l.to_string()).collect();
        assert_eq!(
            facts,
            vec![
                "Occupation(B, Lawyer)",
                "-Customer(Joe, B)",
                "Occupation(C, Lawyer)",
                "Customer(Joe, C)"
            ]
        );
        assert_eq!(cm.domain, vec!["Joe", "Lawyer", "B", "C"]);
    }

    #[test]
    fn actor_countermodel_identifies_second_job_with_actor() {
        let buggy = "Occupation(Joe,Actor) & exists x Occupation(Joe,x)";
        let correct = "Occupation(Joe,Actor) & exists x (Occupation(Joe,x) & x != Actor)";
        let TableauOutcome::Countermodel(cm) = search(&format!("({correct}) <-> ({buggy})")) else {
            panic!("expected countermodel");
        };
        let facts: Vec<String> = cm.literals.iter().map(|l| l.to_string()).collect();
        assert_eq!(facts, vec!["Occupation(Joe, Actor)", "Occupation(Joe, B)", "B = Actor"]);
        assert_eq!(cm.domain, vec!["Actor", "Joe"]);
    }

    #[test]
    fn congruence_closes_branches() {
        let sig = Signature::new().with_constants(["A", "B"]).with_function("F", 1).with_predicate("P", 1);
        let g = parse("A = B -> (P(F(A)) -> P(F(B)))", &sig).unwrap();
        assert_eq!(tableau_search(&g, &sig, &TableauBudget::default()), TableauOutcome::Closed);
    }

    #[test]
    fn respects_stop_token() {
        let budget = TableauBudget::with_stop(StopToken::after(std::time::Duration::ZERO));
        assert_eq!(
            tableau_search(&f("P(Joe)"), &sig(), &budget),
            TableauOutcome::Interrupted
        );
    }
}
