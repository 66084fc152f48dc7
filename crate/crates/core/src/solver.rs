//! Model search: a DPLL-style solver that propagates with `W`, the model
//! check it relies on at the leaves, and a guess-and-verify reference.

use crate::error::{Error, Result};
use crate::kb::{Atom, AtomSet, KnowledgeBase, Partition};
use crate::propagation::{propagate, PropagationResult};

/// Largest `KA(K)` the guess-and-verify enumerator accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;
/// Largest true side whose subsets the minimality check enumerates.
pub const CHECK_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Branching points, each trying an atom true and then false.
    pub decisions: u64,
    /// Propagations that ended in a conflict.
    pub conflicts: u64,
    /// Calls to [`check_model`].
    pub checks: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub found: bool,
    /// Total model partitions, ordered by their true atoms' ids.
    pub models: Vec<Partition>,
    pub stats: SolveStats,
}

/// Orders partitions by the id sequence of their true side.
fn sort_models(models: &mut [Partition]) {
    models.sort_by_cached_key(|p| p.t().to_vec());
}

/// Decides whether the total partition `p` is induced by an MKNF model,
/// i.e. whether `M = {I | I ⊨ OB_T}` is a model of `kb`.
///
/// Checks that `OB_T` is consistent, entails no atom of `F`, satisfies every
/// rule whose body holds, and that no `S ⊆ T` yields a strictly larger set of
/// interpretations that still satisfies the rules (with `not` evaluated
/// against `p`).
pub fn check_model(kb: &KnowledgeBase, p: &Partition) -> Result<bool> {
    let ka = kb.ka();
    if !p.is_total(ka) {
        return Err(Error::NotTotal(
            ka.difference(p.t()).difference(p.f()).len(),
        ));
    }
    if p.t().len() > CHECK_LIMIT {
        return Err(Error::SizeGuard {
            what: "model check",
            size: 1u128 << p.t().len(),
            limit: 1u128 << CHECK_LIMIT,
        });
    }
    let o = kb.ontology();
    if !o.consistent(p.t()) || o.dependability_witness(p.t(), p.f()).is_some() {
        return Ok(false);
    }
    let violated = kb.rules().iter().any(|r| {
        r.body_pos_within(p.t())
            && r.body_neg().iter().all(|&a| p.f().contains(a))
            && !r.head_intersects(p.t())
    });
    if violated {
        return Ok(false);
    }
    // Only rules whose negative body is false in p constrain a competitor.
    let relevant: Vec<_> = kb
        .rules()
        .iter()
        .filter(|r| r.body_neg().iter().all(|&a| p.f().contains(a)))
        .collect();
    let t = p.t().to_vec();
    for mask in 0u64..(1u64 << t.len()) {
        let s: AtomSet = t
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        let known = o.consequences(&s, ka);
        if p.t().is_subset(&known) {
            continue;
        }
        let satisfied = relevant
            .iter()
            .all(|r| !r.body_pos_within(&known) || r.head_intersects(&known));
        if satisfied {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Search<'a> {
    kb: &'a KnowledgeBase,
    all_models: bool,
    models: Vec<Partition>,
    stats: SolveStats,
}

impl Search<'_> {
    /// Returns `Ok(true)` once the search may stop.
    fn run(&mut self, p: Partition) -> Result<bool> {
        let p = match propagate(self.kb, &p) {
            PropagationResult::Propagated(p) => p,
            PropagationResult::Conflict(_) => {
                self.stats.conflicts += 1;
                return Ok(false);
            }
        };
        match self.next_atom(&p) {
            None => {
                self.stats.checks += 1;
                if check_model(self.kb, &p)? {
                    debug_assert!(!self.models.contains(&p));
                    self.models.push(p);
                    return Ok(!self.all_models);
                }
                Ok(false)
            }
            Some(a) => {
                self.stats.decisions += 1;
                let on_true = p.with_true(a).expect("atom is undecided");
                if self.run(on_true)? {
                    return Ok(true);
                }
                let on_false = p.with_false(a).expect("atom is undecided");
                self.run(on_false)
            }
        }
    }

    fn next_atom(&self, p: &Partition) -> Option<Atom> {
        self.kb.ka().iter().find(|&a| !p.is_decided(a))
    }
}

/// Searches for MKNF models extending `p`: propagate, fail on conflict, check
/// total partitions, and otherwise branch on the undecided atom with the
/// smallest id (true first).
///
/// Without `all_models` the search stops at the first model.
pub fn solve(kb: &KnowledgeBase, p: &Partition, all_models: bool) -> Result<SolveOutcome> {
    let mut search = Search {
        kb,
        all_models,
        models: Vec::new(),
        stats: SolveStats::default(),
    };
    search.run(p.clone())?;
    let mut models = search.models;
    sort_models(&mut models);
    Ok(SolveOutcome {
        found: !models.is_empty(),
        models,
        stats: search.stats,
    })
}

/// Every total partition of `KA(K)` that passes [`check_model`].
pub fn brute_force_models(kb: &KnowledgeBase) -> Result<Vec<Partition>> {
    let ka = kb.ka().to_vec();
    if ka.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard {
            what: "model enumeration",
            size: 1u128 << ka.len(),
            limit: 1u128 << BRUTE_FORCE_LIMIT,
        });
    }
    let mut models = Vec::new();
    for mask in 0u64..(1u64 << ka.len()) {
        let (mut t, mut f) = (AtomSet::new(), AtomSet::new());
        for (i, &a) in ka.iter().enumerate() {
            if mask >> i & 1 == 1 {
                t.insert(a);
            } else {
                f.insert(a);
            }
        }
        let p = Partition::new(t, f).expect("disjoint by construction");
        if check_model(kb, &p)? {
            models.push(p);
        }
    }
    sort_models(&mut models);
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_kb;

    const EXAMPLE_1: &str = "f :- b. a :- not b. a ; b ; c. a_p :- a_p. b_p :- b_p.
        #clause -a | a_p. #clause -b | b_p. #clause -f.";
    const EXAMPLE_2: &str = "a :- not b. b :- not a. #clause -a | b.";
    const EXAMPLE_3: &str = "a ; b.";
    const EXAMPLE_4: &str = "a :- not a.";

    fn kb(text: &str) -> KnowledgeBase {
        parse_kb(text).unwrap().into_kb()
    }

    fn part(kb: &KnowledgeBase, t: &[&str], f: &[&str]) -> Partition {
        kb.partition(t.iter().copied(), f.iter().copied()).unwrap()
    }

    #[test]
    fn check_model_examples() {
        let k = kb(EXAMPLE_2);
        assert!(check_model(&k, &part(&k, &["b"], &["a"])).unwrap());
        assert!(!check_model(&k, &part(&k, &["a"], &["b"])).unwrap());

        let k = kb(EXAMPLE_4);
        assert!(!check_model(&k, &part(&k, &["a"], &[])).unwrap());
        assert!(!check_model(&k, &part(&k, &[], &["a"])).unwrap());

        let k = kb(EXAMPLE_3);
        assert!(!check_model(&k, &part(&k, &["a", "b"], &[])).unwrap());
        assert!(check_model(&k, &part(&k, &["a"], &["b"])).unwrap());
    }

    #[test]
    fn check_model_rejects_partial_partitions() {
        let k = kb(EXAMPLE_3);
        assert!(matches!(
            check_model(&k, &part(&k, &["a"], &[])),
            Err(Error::NotTotal(1))
        ));
    }

    #[test]
    fn check_model_uses_ontology_for_minimality() {
        // b is only known through the ontology, so {a} is the whole model.
        let k = kb("a. b :- b. #clause -a | b.");
        assert!(check_model(&k, &part(&k, &["a", "b"], &[])).unwrap());
        // Unsupported atoms break minimality.
        let k = kb("a :- a.");
        assert!(!check_model(&k, &part(&k, &["a"], &[])).unwrap());
        assert!(check_model(&k, &part(&k, &[], &["a"])).unwrap());
    }

    #[test]
    fn solve_examples() {
        let k = kb(EXAMPLE_2);
        let out = solve(&k, &Partition::empty(), true).unwrap();
        assert_eq!(out.models, [part(&k, &["b"], &["a"])]);
        assert!(out.stats.decisions <= 1);

        let k = kb(EXAMPLE_4);
        let out = solve(&k, &Partition::empty(), false).unwrap();
        assert!(!out.found && out.models.is_empty());

        let k = kb(EXAMPLE_3);
        let out = solve(&k, &Partition::empty(), true).unwrap();
        assert_eq!(
            out.models,
            [part(&k, &["a"], &["b"]), part(&k, &["b"], &["a"])]
        );
    }

    #[test]
    fn example_1_model() {
        let k = kb(EXAMPLE_1);
        let out = solve(&k, &Partition::empty(), true).unwrap();
        assert_eq!(
            out.models,
            [part(&k, &["a", "a_p"], &["b", "b_p", "c", "f"])]
        );
        assert!(out.stats.decisions <= 1);
        assert_eq!(out.models, brute_force_models(&k).unwrap());
    }

    #[test]
    fn first_model_only_without_all() {
        let k = kb(EXAMPLE_3);
        let out = solve(&k, &Partition::empty(), false).unwrap();
        assert_eq!(out.models.len(), 1);
        assert!(out.found);
    }

    #[test]
    fn brute_force_examples() {
        let k = kb(EXAMPLE_2);
        assert_eq!(brute_force_models(&k).unwrap(), [part(&k, &["b"], &["a"])]);
        let k = kb(EXAMPLE_4);
        assert!(brute_force_models(&k).unwrap().is_empty());
        let k = kb(EXAMPLE_3);
        assert_eq!(
            brute_force_models(&k).unwrap(),
            [part(&k, &["a"], &["b"]), part(&k, &["b"], &["a"])]
        );
    }

    #[test]
    fn brute_force_guard() {
        let text: String = (0..21).map(|i| format!("a{i} :- a{i}.\n")).collect();
        assert!(matches!(
            brute_force_models(&kb(&text)),
            Err(Error::SizeGuard { .. })
        ));
    }
}
