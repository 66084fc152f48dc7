//! Unfounded sets of disjunctive hybrid knowledge bases.
//!
//! Two routes are provided:
//!
//! * an exact one that enumerates head-cuts ([`is_unfounded_set`],
//!   [`greatest_unfounded_set`]). Deciding unfoundedness is coNP-hard even for
//!   normal rules with a polynomial ontology, so these refuse instances whose
//!   head-cut space exceeds [`SEARCH_LIMIT`];
//! * the polynomial `Z` operator and its least fixpoint `Atmost`
//!   ([`z_step`], [`atmost`], [`unfounded_approx`]), whose complement is always
//!   a subset of the greatest unfounded set.
//!
//! [`is_head_independent`] decides the condition under which the two agree.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::kb::{Atom, AtomSet, HeadCut, KnowledgeBase, Partition, Rule};
use crate::ontology::is_dependable;

/// Largest head-cut (or weak head-cut) space the exact routines enumerate.
pub const SEARCH_LIMIT: u128 = 1 << 24;

/// A set of K-atoms reported as unfounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoundedReport {
    pub set: AtomSet,
    /// True for the head-cut enumeration, false for the `Z` approximation.
    pub exact: bool,
    /// False when the input partition was not dependable. In that case every
    /// subset of `KA(K)` is unfounded and the exact report is all of `KA(K)`.
    pub dependable: bool,
}

/// A head-cut that derives `atom` and shows it is not unfounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub atom: Atom,
    pub head_cut: HeadCut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub unfounded: bool,
    pub witness: Option<Witness>,
}

/// Number of head-cuts: each rule is skipped or contributes one head atom.
pub fn head_cut_space(kb: &KnowledgeBase) -> u128 {
    kb.rules().iter().fold(1u128, |acc, r| {
        acc.saturating_mul(1 + r.head().len() as u128)
    })
}

/// Number of weak head-cuts: each rule contributes any subset of its head.
pub fn weak_head_cut_space(kb: &KnowledgeBase) -> u128 {
    kb.rules().iter().fold(1u128, |acc, r| {
        acc.saturating_mul(
            1u128
                .checked_shl(r.head().len() as u32)
                .unwrap_or(u128::MAX),
        )
    })
}

fn guard(what: &'static str, size: u128) -> Result<()> {
    if size > SEARCH_LIMIT {
        return Err(Error::SizeGuard {
            what,
            size,
            limit: SEARCH_LIMIT,
        });
    }
    Ok(())
}

/// Visits every digit vector of a mixed-radix counter, last position fastest.
fn for_each_choice<F>(radices: &[usize], mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if radices.contains(&0) {
        return ControlFlow::Continue(());
    }
    let mut digits = vec![0; radices.len()];
    loop {
        visit(&digits)?;
        let mut i = radices.len();
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Rules none of whose pairs can trigger conditions i-iii w.r.t. `(T, F)` and `x`.
fn non_triggering_rules(kb: &KnowledgeBase, p: &Partition, x: &AtomSet) -> Vec<usize> {
    let blocked = p.f().union(x);
    kb.rules()
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            !r.body_pos_intersects(&blocked)
                && !r.body_neg_intersects(p.t())
                && !r.head_intersects(p.t())
        })
        .map(|(i, _)| i)
        .collect()
}

/// Enumerates the head-cuts over `rules` (skip, then head atoms by id),
/// passing `T ∪ head(R)` and the selected pairs.
fn for_each_head_cut<F>(kb: &KnowledgeBase, t: &AtomSet, rules: &[usize], mut visit: F)
where
    F: FnMut(&AtomSet, &dyn Fn() -> HeadCut) -> ControlFlow<()>,
{
    let radices: Vec<usize> = rules
        .iter()
        .map(|&r| 1 + kb.rules()[r].head().len())
        .collect();
    let _ = for_each_choice(&radices, |digits| {
        let mut base = t.clone();
        for (&r, &d) in rules.iter().zip(digits) {
            if d > 0 {
                base.insert(kb.rules()[r].head()[d - 1]);
            }
        }
        let pairs = || {
            HeadCut::from_sorted_pairs(
                rules
                    .iter()
                    .zip(digits)
                    .filter(|(_, &d)| d > 0)
                    .map(|(&r, &d)| (r, kb.rules()[r].head()[d - 1]))
                    .collect(),
            )
        };
        visit(&base, &pairs)
    });
}

fn check_within_ka(kb: &KnowledgeBase, x: &AtomSet) -> Result<()> {
    match x.iter().find(|&a| !kb.ka().contains(a)) {
        Some(a) => Err(Error::NotInKa(kb.name(a).to_string())),
        None => Ok(()),
    }
}

/// Decides whether `x` is an unfounded set of `kb` w.r.t. `p`.
///
/// On a negative answer the witness is the first defeating head-cut in
/// enumeration order together with the atom it derives.
pub fn is_unfounded_set(kb: &KnowledgeBase, p: &Partition, x: &AtomSet) -> Result<Membership> {
    check_within_ka(kb, x)?;
    guard("head-cut enumeration", head_cut_space(kb))?;
    let unfounded = Membership {
        unfounded: true,
        witness: None,
    };
    if x.is_empty() || !is_dependable(kb, p) {
        return Ok(unfounded);
    }
    let o = kb.ontology();
    // A head-cut containing a triggering pair never defeats x, so only the
    // remaining rules need to be enumerated.
    let rules = non_triggering_rules(kb, p, x);
    let mut witness = None;
    for_each_head_cut(kb, p.t(), &rules, |base, pairs| {
        if !o.dependable(base, p.f()) {
            return ControlFlow::Continue(());
        }
        match x.iter().find(|&a| o.entails(base, a)) {
            Some(atom) => {
                witness = Some(Witness {
                    atom,
                    head_cut: pairs(),
                });
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    Ok(match witness {
        Some(w) => Membership {
            unfounded: false,
            witness: Some(w),
        },
        None => unfounded,
    })
}

/// The greatest unfounded set `U(T, F)`, by greatest-fixpoint deletion.
///
/// Starting from `KA(K) \ T`, every atom derivable by a head-cut that meets
/// conditions 1-2 and has no pair triggering i-iii w.r.t. the current set is
/// removed, until nothing changes.
pub fn greatest_unfounded_set(kb: &KnowledgeBase, p: &Partition) -> Result<UnfoundedReport> {
    guard("head-cut enumeration", head_cut_space(kb))?;
    if !is_dependable(kb, p) {
        return Ok(UnfoundedReport {
            set: kb.ka().clone(),
            exact: true,
            dependable: false,
        });
    }
    let o = kb.ontology();
    let mut x = kb.ka().difference(p.t());
    loop {
        let rules = non_triggering_rules(kb, p, &x);
        let mut founded = AtomSet::new();
        for_each_head_cut(kb, p.t(), &rules, |base, _| {
            if o.dependable(base, p.f()) {
                founded.union_with(&o.consequences(base, &x));
                if x.is_subset(&founded) {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if founded.is_empty() {
            break;
        }
        x.difference_with(&founded);
    }
    Ok(UnfoundedReport {
        set: x,
        exact: true,
        dependable: true,
    })
}

fn rule_fires_for_z(rule: &Rule, p: &Partition, x: &AtomSet) -> bool {
    rule.body_pos_within(x)
        && !rule.body_pos_intersects(p.f())
        && !rule.body_neg_intersects(p.t())
        && !rule.head_intersects(p.t())
}

/// One application of `Z^(T,F)` to `x`.
///
/// A head atom `a` of a firing rule is admitted only if `(T ∪ {a}, F)` passes
/// the dependability test.
pub fn z_step(kb: &KnowledgeBase, p: &Partition, x: &AtomSet) -> AtomSet {
    let o = kb.ontology();
    let mut out = p.t().union(&o.consequences(x, kb.ka()));
    for rule in kb.rules().iter().filter(|r| rule_fires_for_z(r, p, x)) {
        for &a in rule.head() {
            if out.contains(a) {
                continue;
            }
            let mut base = p.t().clone();
            base.insert(a);
            if o.dependable(&base, p.f()) {
                out.insert(a);
            }
        }
    }
    out
}

/// `Atmost(T, F)`: the least fixpoint of [`z_step`], iterated from `∅`.
pub fn atmost(kb: &KnowledgeBase, p: &Partition) -> AtomSet {
    let mut x = kb.empty_set();
    loop {
        let next = z_step(kb, p, &x);
        if next == x {
            return x;
        }
        x = next;
    }
}

/// `KA(K) \ Atmost(T, F)`, a subset of the greatest unfounded set.
pub fn unfounded_approx(kb: &KnowledgeBase, p: &Partition) -> UnfoundedReport {
    UnfoundedReport {
        set: kb.ka().difference(&atmost(kb, p)),
        exact: false,
        dependable: is_dependable(kb, p),
    }
}

/// A weak head-cut deriving `atom` (together with `OB_T`) although no
/// head-cut inside it does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadIndependenceViolation {
    pub atom: Atom,
    pub weak_head_cut: HeadCut,
}

/// Searches for a violation of head-independence w.r.t. `p`.
pub fn head_independence_violation(
    kb: &KnowledgeBase,
    p: &Partition,
) -> Result<Option<HeadIndependenceViolation>> {
    if kb.is_normal() {
        return Ok(None);
    }
    guard("weak head-cut enumeration", weak_head_cut_space(kb))?;
    let o = kb.ontology();
    let already = o.consequences(p.t(), kb.ka());
    let rules = kb.rules();
    let radices: Vec<usize> = rules.iter().map(|r| 1 << r.head().len()).collect();
    let mut violation = None;
    let _ = for_each_choice(&radices, |masks| {
        // With at most one atom per rule the weak head-cut is a head-cut.
        if masks.iter().all(|m| m.count_ones() <= 1) {
            return ControlFlow::Continue(());
        }
        let selected: Vec<Vec<Atom>> = rules
            .iter()
            .zip(masks)
            .map(|(r, &m)| {
                r.head()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, &a)| a)
                    .collect()
            })
            .collect();
        let mut base = p.t().clone();
        base.extend(selected.iter().flatten().copied());
        let derived = o.consequences(&base, kb.ka()).difference(&already);
        if derived.is_empty() {
            return ControlFlow::Continue(());
        }
        // Any head-cut inside the weak one is contained in one that picks
        // exactly one atom from every non-empty selection.
        let picks: Vec<usize> = selected
            .iter()
            .filter(|s| !s.is_empty())
            .map(Vec::len)
            .collect();
        let nonempty: Vec<&Vec<Atom>> = selected.iter().filter(|s| !s.is_empty()).collect();
        let mut covered = AtomSet::new();
        let _ = for_each_choice(&picks, |digits| {
            let mut cut = p.t().clone();
            cut.extend(nonempty.iter().zip(digits).map(|(s, &d)| s[d]));
            covered.union_with(&o.consequences(&cut, kb.ka()));
            if derived.is_subset(&covered) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        match derived.difference(&covered).iter().next() {
            Some(atom) => {
                let pairs = selected
                    .iter()
                    .enumerate()
                    .flat_map(|(r, s)| s.iter().map(move |&a| (r, a)))
                    .collect();
                violation = Some(HeadIndependenceViolation {
                    atom,
                    weak_head_cut: HeadCut::from_sorted_pairs(pairs),
                });
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    Ok(violation)
}

/// Whether `kb` is head-independent w.r.t. the dependable partition `p`.
/// Normal knowledge bases are head-independent by construction.
pub fn is_head_independent(kb: &KnowledgeBase, p: &Partition) -> Result<bool> {
    Ok(head_independence_violation(kb, p)?.is_none())
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
    const EXAMPLE_5: &str = "a :- not b. b :- not a. c :- c. #clause -a | -b.";
    const EXAMPLE_6: &str = "a ; b. c :- c. #clause -a | -b | c.";
    const EXAMPLE_6_SPLIT: &str = "a :- not b. b :- not a. c :- c. #clause -a | -b | c.";

    fn kb(text: &str) -> KnowledgeBase {
        parse_kb(text).unwrap().into_kb()
    }

    fn set(kb: &KnowledgeBase, names: &[&str]) -> AtomSet {
        kb.atom_set(names.iter().copied()).unwrap()
    }

    fn part(kb: &KnowledgeBase, t: &[&str], f: &[&str]) -> Partition {
        kb.partition(t.iter().copied(), f.iter().copied()).unwrap()
    }

    fn names(kb: &KnowledgeBase, s: &AtomSet) -> Vec<String> {
        kb.names(s)
    }

    #[test]
    fn example_1_atoms_are_unfounded() {
        let k = kb(EXAMPLE_1);
        let p = part(&k, &["b"], &[]);
        let x = set(&k, &["f", "a", "a_p", "c"]);
        assert!(is_unfounded_set(&k, &p, &x).unwrap().unfounded);
        let with_b_p = set(&k, &["b_p"]);
        let m = is_unfounded_set(&k, &p, &with_b_p).unwrap();
        assert!(!m.unfounded);
        // b is already true, so the empty head-cut derives b_p.
        assert!(m.witness.unwrap().head_cut.is_empty());
    }

    #[test]
    fn example_2_false_atom_is_unfounded() {
        let k = kb(EXAMPLE_2);
        let p = part(&k, &[], &["a"]);
        assert!(
            is_unfounded_set(&k, &p, &set(&k, &["a"]))
                .unwrap()
                .unfounded
        );
        // Neither atom is unfounded w.r.t. ({a}, ∅).
        let p = part(&k, &["a"], &[]);
        for x in ["a", "b"] {
            assert!(!is_unfounded_set(&k, &p, &set(&k, &[x])).unwrap().unfounded);
        }
    }

    #[test]
    fn example_3_no_subset_of_true_atoms_is_unfounded() {
        let k = kb(EXAMPLE_3);
        let p = part(&k, &["a", "b"], &[]);
        for x in [&["a"][..], &["b"], &["a", "b"]] {
            assert!(!is_unfounded_set(&k, &p, &set(&k, x)).unwrap().unfounded);
        }
    }

    #[test]
    fn greatest_unfounded_set_examples() {
        let k = kb(EXAMPLE_1);
        let gus = greatest_unfounded_set(&k, &part(&k, &["b"], &[])).unwrap();
        assert_eq!(names(&k, &gus.set), ["a", "a_p", "c", "f"]);
        assert!(gus.exact && gus.dependable);

        let k = kb(EXAMPLE_4);
        let gus = greatest_unfounded_set(&k, &part(&k, &["a"], &[])).unwrap();
        assert!(gus.set.is_empty());

        let k = kb(EXAMPLE_5);
        let gus = greatest_unfounded_set(&k, &Partition::empty()).unwrap();
        assert_eq!(names(&k, &gus.set), ["c"]);
    }

    #[test]
    fn example_5_singleton_head_cuts_defeat_a_and_b() {
        let k = kb(EXAMPLE_5);
        let p = Partition::empty();
        for (atom, rule) in [("a", 0), ("b", 1)] {
            let m = is_unfounded_set(&k, &p, &set(&k, &[atom])).unwrap();
            let w = m.witness.unwrap();
            assert_eq!(w.head_cut.pairs(), [(rule, k.atom(atom).unwrap())]);
        }
    }

    #[test]
    fn non_dependable_partition_makes_everything_unfounded() {
        let k = kb(EXAMPLE_1);
        let p = part(&k, &["f"], &[]);
        assert!(
            is_unfounded_set(&k, &p, &set(&k, &["f", "b"]))
                .unwrap()
                .unfounded
        );
        let gus = greatest_unfounded_set(&k, &p).unwrap();
        assert_eq!(gus.set, *k.ka());
        assert!(!gus.dependable);
    }

    #[test]
    fn membership_rejects_atoms_outside_ka() {
        let k = kb("a :- b. #clause -a | z.");
        let x = set(&k, &["z"]);
        assert!(matches!(
            is_unfounded_set(&k, &Partition::empty(), &x),
            Err(Error::NotInKa(_))
        ));
    }

    #[test]
    fn z_step_examples() {
        let k = kb(EXAMPLE_5);
        let p = Partition::empty();
        assert_eq!(names(&k, &z_step(&k, &p, &AtomSet::new())), ["a", "b"]);

        let k = kb(EXAMPLE_6);
        assert_eq!(
            names(&k, &z_step(&k, &p, &set(&k, &["a", "b"]))),
            ["a", "b", "c"]
        );

        let k = kb("a :- b. c :- not d. #clause -c | d.");
        let p = part(&k, &["d"], &[]);
        assert_eq!(names(&k, &z_step(&k, &p, &AtomSet::new())), ["d"]);
    }

    #[test]
    fn atmost_examples() {
        let k = kb(EXAMPLE_6);
        assert_eq!(names(&k, &atmost(&k, &Partition::empty())), ["a", "b", "c"]);
        let k = kb(EXAMPLE_5);
        assert_eq!(names(&k, &atmost(&k, &Partition::empty())), ["a", "b", "c"]);
        let k = kb(EXAMPLE_1);
        assert_eq!(names(&k, &atmost(&k, &part(&k, &["b"], &[]))), ["b", "b_p"]);
    }

    #[test]
    fn approximation_examples() {
        let k = kb(EXAMPLE_1);
        let p = part(&k, &["b"], &[]);
        let approx = unfounded_approx(&k, &p);
        assert_eq!(names(&k, &approx.set), ["a", "a_p", "c", "f"]);
        assert!(!approx.exact);
        assert_eq!(approx.set, greatest_unfounded_set(&k, &p).unwrap().set);

        for text in [EXAMPLE_5, EXAMPLE_6] {
            let k = kb(text);
            let p = Partition::empty();
            assert!(unfounded_approx(&k, &p).set.is_empty());
            assert_eq!(
                names(&k, &greatest_unfounded_set(&k, &p).unwrap().set),
                ["c"]
            );
        }
    }

    #[test]
    fn head_independence_examples() {
        let k = kb(EXAMPLE_6);
        let p = Partition::empty();
        assert!(!is_head_independent(&k, &p).unwrap());
        let v = head_independence_violation(&k, &p).unwrap().unwrap();
        assert_eq!(k.name(v.atom), "c");
        assert!(!v.weak_head_cut.is_strict());

        let k = kb(EXAMPLE_6_SPLIT);
        assert!(is_head_independent(&k, &p).unwrap());

        let k = kb(EXAMPLE_2);
        assert!(is_head_independent(&k, &part(&k, &[], &["a"])).unwrap());
    }

    #[test]
    fn false_atoms_without_consistent_support_are_unfounded() {
        // The only head-cut deriving a contradicts a ∈ F.
        let k = kb(EXAMPLE_4);
        let p = part(&k, &[], &["a"]);
        assert!(
            is_unfounded_set(&k, &p, &set(&k, &["a"]))
                .unwrap()
                .unfounded
        );
        assert_eq!(
            names(&k, &greatest_unfounded_set(&k, &p).unwrap().set),
            ["a"]
        );
    }

    #[test]
    fn approximation_ignores_false_atoms_in_entailment() {
        // Normal, so head-independent, and Atmost = KA is consistent with O.
        // Deriving b needs both a1 and a2, which together contradict b ∈ F,
        // so b is unfounded; the entailment part of Z ignores F and keeps b.
        let k = kb("a1. a2. b :- b. #clause -a1 | -a2 | b.");
        let p = part(&k, &[], &["b"]);
        assert!(is_head_independent(&k, &p).unwrap());
        let upper = atmost(&k, &p);
        assert_eq!(upper, *k.ka());
        assert!(k.ontology().consistent(&upper));
        assert_eq!(
            names(&k, &greatest_unfounded_set(&k, &p).unwrap().set),
            ["b"]
        );
        assert!(unfounded_approx(&k, &p).set.is_empty());
    }

    #[test]
    fn size_guard_refuses_huge_head_cut_spaces() {
        // 13 rules with 3 head atoms: 4^13 = 2^26 head-cuts.
        let text: String = (0..13).map(|i| format!("a{i} ; b{i} ; c{i}.\n")).collect();
        let k = kb(&text);
        let p = Partition::empty();
        assert!(matches!(
            greatest_unfounded_set(&k, &p),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            is_unfounded_set(&k, &p, &AtomSet::new()),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            is_head_independent(&k, &p),
            Err(Error::SizeGuard { .. })
        ));
        // The approximation is polynomial and has no guard.
        assert!(unfounded_approx(&k, &p).set.is_empty());
    }

    #[test]
    fn choice_enumeration_order_is_lexicographic() {
        let mut seen = Vec::new();
        let _ = for_each_choice(&[2, 3], |d| {
            seen.push(d.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(
            seen,
            [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2]].map(|a| a.to_vec())
        );
        let mut count = 0;
        let _ = for_each_choice(&[], |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 1);
    }
}
