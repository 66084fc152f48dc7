//! The `T` and `W` operators and the fixpoint propagation used by the solver.

use crate::kb::{applicable, Atom, AtomSet, KnowledgeBase, Partition};
use crate::unfounded::atmost;

/// Why propagation gave up on a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationConflict {
    /// Atoms derived both true and false.
    Overlap(AtomSet),
    /// An atom of `F` that `OB_T` entails.
    NotDependable(Atom),
    /// `OB_T` is inconsistent and `F` is empty.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationResult {
    /// The fixpoint, which is dependable.
    Propagated(Partition),
    Conflict(PropagationConflict),
}

impl PropagationResult {
    pub fn partition(&self) -> Option<&Partition> {
        match self {
            PropagationResult::Propagated(p) => Some(p),
            PropagationResult::Conflict(_) => None,
        }
    }

    pub fn conflict(&self) -> Option<&PropagationConflict> {
        match self {
            PropagationResult::Propagated(_) => None,
            PropagationResult::Conflict(c) => Some(c),
        }
    }

    pub fn is_conflict(&self) -> bool {
        self.conflict().is_some()
    }
}

/// `T`: atoms entailed by `OB_{acc.t}`, plus the single remaining head atom
/// of every rule whose body holds in `acc` once the false atoms of `acc` are
/// removed from its head.
///
/// `base` is not consulted: `acc ⊒ base`, so `acc.f` already contains it.
pub fn t_step(kb: &KnowledgeBase, _base: &Partition, acc: &Partition) -> AtomSet {
    let mut out = kb.ontology().consequences(acc.t(), kb.ka());
    for rule in kb.rules().iter().filter(|r| applicable(r, acc)) {
        let mut rest = rule.head().iter().filter(|&&a| !acc.f().contains(a));
        if let (Some(&a), None) = (rest.next(), rest.next()) {
            out.insert(a);
        }
    }
    out
}

/// `W`: `(T(acc) ∪ base.t, (KA(K) \ Atmost(acc)) ∪ base.f)`. The two sides may
/// overlap; the caller decides what to do about it.
pub fn w_step(kb: &KnowledgeBase, base: &Partition, acc: &Partition) -> (AtomSet, AtomSet) {
    let mut t = t_step(kb, base, acc);
    t.union_with(base.t());
    let mut f = kb.ka().difference(&atmost(kb, acc));
    f.union_with(base.f());
    (t, f)
}

/// Iterates `acc ← acc ⊔ W(acc)` from `p` to a fixpoint, then checks that
/// the fixpoint is dependable.
pub fn propagate(kb: &KnowledgeBase, p: &Partition) -> PropagationResult {
    let mut acc = p.clone();
    loop {
        let (mut t, mut f) = w_step(kb, p, &acc);
        t.union_with(acc.t());
        f.union_with(acc.f());
        let next = match Partition::new(t, f) {
            Ok(next) => next,
            Err(c) => return PropagationResult::Conflict(PropagationConflict::Overlap(c.atoms)),
        };
        if next == acc {
            break;
        }
        acc = next;
    }
    let o = kb.ontology();
    if acc.f().is_empty() {
        if !o.consistent(acc.t()) {
            return PropagationResult::Conflict(PropagationConflict::Inconsistent);
        }
    } else if let Some(b) = o.dependability_witness(acc.t(), acc.f()) {
        return PropagationResult::Conflict(PropagationConflict::NotDependable(b));
    }
    PropagationResult::Propagated(acc)
}
