//! Propositional clausal ontologies and the objective-knowledge queries built on them.
//!
//! `OB_S` is the ontology together with every atom of `S` asserted true. All
//! queries reduce to [`ClausalOntology::sat`], a complete DPLL search with unit
//! propagation. Results are memoized per assumption set; the cache is behind a
//! mutex so a shared ontology can be queried from several threads.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::Error;
use crate::kb::{Atom, AtomSet, KnowledgeBase, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }
}

/// A non-empty, non-tautological disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(mut literals: Vec<Literal>) -> Result<Self, Error> {
        if literals.is_empty() {
            return Err(Error::EmptyClause);
        }
        literals.sort_unstable();
        literals.dedup();
        if let Some(w) = literals.windows(2).find(|w| w[0].atom == w[1].atom) {
            return Err(Error::TautologicalClause(w[0].atom.to_string()));
        }
        Ok(Clause { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }
}

type CacheKey = (AtomSet, AtomSet);

#[derive(Default)]
pub struct ClausalOntology {
    clauses: Vec<Clause>,
    vocabulary: AtomSet,
    num_vars: usize,
    cache: Mutex<HashMap<CacheKey, bool>>,
}

impl Clone for ClausalOntology {
    fn clone(&self) -> Self {
        ClausalOntology::new(self.clauses.clone())
    }
}

impl fmt::Debug for ClausalOntology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClausalOntology")
            .field("clauses", &self.clauses)
            .finish_non_exhaustive()
    }
}

impl ClausalOntology {
    pub fn new(clauses: Vec<Clause>) -> Self {
        let vocabulary: AtomSet = clauses
            .iter()
            .flat_map(|c| c.literals.iter().map(|l| l.atom))
            .collect();
        let num_vars = vocabulary.iter().last().map_or(0, |a| a.index() + 1);
        ClausalOntology {
            clauses,
            vocabulary,
            num_vars,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn vocabulary(&self) -> &AtomSet {
        &self.vocabulary
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Whether some total assignment satisfies every clause and every
    /// assumption literal.
    pub fn sat(&self, assumptions: &[Literal]) -> bool {
        let mut pos = AtomSet::new();
        let mut neg = AtomSet::new();
        for l in assumptions {
            if l.positive {
                pos.insert(l.atom);
            } else {
                neg.insert(l.atom);
            }
        }
        self.sat_sets(&pos, &neg)
    }

    /// [`sat`](Self::sat) with the assumptions given as the atoms asserted
    /// true (`pos`) and false (`neg`).
    pub fn sat_sets(&self, pos: &AtomSet, neg: &AtomSet) -> bool {
        if pos.intersects(neg) {
            return false;
        }
        let key = (pos.clone(), neg.clone());
        if let Some(&hit) = self.cache.lock().unwrap().get(&key) {
            return hit;
        }
        let result = self.search(pos, neg);
        self.cache.lock().unwrap().insert(key, result);
        result
    }

    fn search(&self, pos: &AtomSet, neg: &AtomSet) -> bool {
        let mut assignment = vec![None; self.num_vars];
        for (set, value) in [(pos, true), (neg, false)] {
            for a in set.iter().filter(|a| a.index() < self.num_vars) {
                assignment[a.index()] = Some(value);
            }
        }
        dpll(&self.clauses, &mut assignment)
    }

    /// `OB_s` is consistent.
    pub fn consistent(&self, s: &AtomSet) -> bool {
        self.sat_sets(s, &AtomSet::new())
    }

    /// `OB_s ⊨ a`, decided by refutation.
    pub fn entails(&self, s: &AtomSet, a: Atom) -> bool {
        if s.contains(a) {
            return true;
        }
        let mut neg = AtomSet::new();
        neg.insert(a);
        !self.sat_sets(s, &neg)
    }

    /// `{a ∈ candidates | OB_s ⊨ a}`.
    pub fn consequences(&self, s: &AtomSet, candidates: &AtomSet) -> AtomSet {
        if !self.consistent(s) {
            return candidates.clone();
        }
        candidates.iter().filter(|&a| self.entails(s, a)).collect()
    }

    /// Whether `(s, f)` passes the dependability test: `OB_s ∪ {¬b}` is
    /// consistent for each `b ∈ f`, and `OB_s` is consistent when `f` is empty.
    pub fn dependable(&self, s: &AtomSet, f: &AtomSet) -> bool {
        if f.is_empty() {
            return self.consistent(s);
        }
        f.iter().all(|b| {
            let mut neg = AtomSet::new();
            neg.insert(b);
            self.sat_sets(s, &neg)
        })
    }

    /// The first atom of `f` that `OB_s` entails, if any.
    pub(crate) fn dependability_witness(&self, s: &AtomSet, f: &AtomSet) -> Option<Atom> {
        f.iter().find(|&b| self.entails(s, b))
    }
}

/// Whether `p` is dependable w.r.t. the ontology of `kb`.
pub fn is_dependable(kb: &KnowledgeBase, p: &Partition) -> bool {
    kb.ontology().dependable(p.t(), p.f())
}

fn dpll(clauses: &[Clause], assignment: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    let ok = propagate_units(clauses, assignment, &mut trail);
    if ok {
        match pick_branch(clauses, assignment) {
            None => return true,
            Some(var) => {
                for value in [true, false] {
                    assignment[var] = Some(value);
                    if dpll(clauses, assignment) {
                        return true;
                    }
                }
                assignment[var] = None;
            }
        }
    }
    for var in trail {
        assignment[var] = None;
    }
    false
}

fn propagate_units(
    clauses: &[Clause],
    assignment: &mut [Option<bool>],
    trail: &mut Vec<usize>,
) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for l in &clause.literals {
                match assignment[l.atom.index()] {
                    Some(v) if v == l.positive => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open_count += 1;
                        open = Some(*l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open_count, open) {
                (0, _) => return false,
                (1, Some(l)) => {
                    assignment[l.atom.index()] = Some(l.positive);
                    trail.push(l.atom.index());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn pick_branch(clauses: &[Clause], assignment: &[Option<bool>]) -> Option<usize> {
    clauses
        .iter()
        .filter(|c| {
            !c.literals
                .iter()
                .any(|l| assignment[l.atom.index()] == Some(l.positive))
        })
        .flat_map(|c| c.literals.iter())
        .find(|l| assignment[l.atom.index()].is_none())
        .map(|l| l.atom.index())
}
