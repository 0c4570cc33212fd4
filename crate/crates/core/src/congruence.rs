//! Congruence closure over ground terms.

use std::collections::HashMap;

use crate::syntax::Term;

/// Union-find over ground terms, closed under `s1 = t1, ..., sn = tn ⇒ f(s) = f(t)`.
#[derive(Debug, Clone, Default)]
pub struct CongruenceClosure {
    ids: HashMap<Term, usize>,
    terms: Vec<Term>,
    parent: Vec<usize>,
    // (function, argument ids) for application terms
    apps: Vec<(usize, String, Vec<usize>)>,
}

impl CongruenceClosure {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `t` and its subterms, returning the id of `t`.
    pub fn add_term(&mut self, t: &Term) -> usize {
        if let Some(&id) = self.ids.get(t) {
            return id;
        }
        let arg_ids = match t {
            Term::App(_, args) => args.iter().map(|a| self.add_term(a)).collect(),
            _ => Vec::new(),
        };
        let id = self.terms.len();
        self.terms.push(t.clone());
        self.parent.push(id);
        self.ids.insert(t.clone(), id);
        if let Term::App(g, _) = t {
            self.apps.push((id, g.clone(), arg_ids));
            self.close();
        }
        id
    }

    pub fn find(&self, mut id: usize) -> usize {
        while self.parent[id] != id {
            id = self.parent[id];
        }
        id
    }

    fn union_ids(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the older term as representative
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        true
    }

    pub fn merge(&mut self, a: &Term, b: &Term) {
        let (ia, ib) = (self.add_term(a), self.add_term(b));
        if self.union_ids(ia, ib) {
            self.close();
        }
    }

    fn close(&mut self) {
        loop {
            let mut changed = false;
            for i in 0..self.apps.len() {
                for j in i + 1..self.apps.len() {
                    let (a, f, xs) = &self.apps[i];
                    let (b, g, ys) = &self.apps[j];
                    if f != g || xs.len() != ys.len() || self.find(*a) == self.find(*b) {
                        continue;
                    }
                    if xs.iter().zip(ys).all(|(x, y)| self.find(*x) == self.find(*y)) {
                        let (a, b) = (*a, *b);
                        changed |= self.union_ids(a, b);
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn equivalent(&mut self, a: &Term, b: &Term) -> bool {
        let (ia, ib) = (self.add_term(a), self.add_term(b));
        self.find(ia) == self.find(ib)
    }

    pub fn id_of(&self, t: &Term) -> Option<usize> {
        self.ids.get(t).copied()
    }

    /// Representative class id of a registered term.
    pub fn class_of(&self, t: &Term) -> Option<usize> {
        self.id_of(t).map(|id| self.find(id))
    }

    /// Registered terms in insertion order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}
