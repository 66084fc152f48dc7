//! Ground disjunctive MKNF rules, knowledge bases, partitions and head-cuts.
//!
//! Every atom is interned to a dense id when a [`KnowledgeBase`] is built. An
//! atom appearing in a partition, a rule or a head-cut always stands for the
//! K-atom `K a`; negative body atoms stand for `K a` under `not`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::error::Error;
use crate::ontology::ClausalOntology;

/// Dense identifier of a ground atom inside one knowledge base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(u32);

impl Atom {
    pub fn new(index: usize) -> Self {
        Atom(u32::try_from(index).expect("atom index exceeds u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Returns true when `name` is a valid atom token (`[a-z][A-Za-z0-9_]*`).
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Bijection between atom names and dense ids `0..n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `name`, returning its existing id if already present.
    pub fn intern(&mut self, name: &str) -> Result<Atom, Error> {
        if let Some(&atom) = self.index.get(name) {
            return Ok(atom);
        }
        if !is_atom_name(name) {
            return Err(Error::InvalidAtomName(name.to_string()));
        }
        let atom = Atom::new(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), atom);
        Ok(atom)
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, &str)> + '_ {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (Atom::new(i), n.as_str()))
    }
}

/// A set of atoms backed by a bitset over atom ids.
///
/// Equality, hashing and ordering only look at the members, never at the
/// allocated capacity.
#[derive(Clone, Default)]
pub struct AtomSet(FixedBitSet);

impl AtomSet {
    pub fn new() -> Self {
        AtomSet(FixedBitSet::new())
    }

    pub fn with_capacity(atoms: usize) -> Self {
        AtomSet(FixedBitSet::with_capacity(atoms))
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        let i = atom.index();
        if i >= self.0.len() {
            self.0.grow(i + 1);
        }
        !self.0.put(i)
    }

    pub fn remove(&mut self, atom: Atom) {
        if atom.index() < self.0.len() {
            self.0.set(atom.index(), false);
        }
    }

    pub fn contains(&self, atom: Atom) -> bool {
        self.0.contains(atom.index())
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.ones().map(Atom::new)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &AtomSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &AtomSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    pub fn is_disjoint(&self, other: &AtomSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        !self.is_disjoint(other)
    }

    /// Members in increasing id order.
    pub fn to_vec(&self) -> Vec<Atom> {
        self.iter().collect()
    }
}

impl PartialEq for AtomSet {
    fn eq(&self, other: &Self) -> bool {
        self.0.ones().eq(other.0.ones())
    }
}

impl Eq for AtomSet {}

impl Hash for AtomSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for i in self.0.ones() {
            i.hash(state);
        }
        usize::MAX.hash(state);
    }
}

impl PartialOrd for AtomSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the increasing member sequences.
impl Ord for AtomSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.ones().cmp(other.0.ones())
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|a| a.index()))
            .finish()
    }
}

impl FromIterator<Atom> for AtomSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut set = AtomSet::new();
        for atom in iter {
            set.insert(atom);
        }
        set
    }
}

impl Extend<Atom> for AtomSet {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        for atom in iter {
            self.insert(atom);
        }
    }
}

/// `K h1, ..., K hk <- K p1, ..., K pm, not n1, ..., not nj`.
///
/// Each component is kept sorted by atom id without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    head: Vec<Atom>,
    body_pos: Vec<Atom>,
    body_neg: Vec<Atom>,
}

fn normalize(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_unstable();
    atoms.dedup();
    atoms
}

impl Rule {
    pub fn new(head: Vec<Atom>, body_pos: Vec<Atom>, body_neg: Vec<Atom>) -> Result<Self, Error> {
        if head.is_empty() {
            return Err(Error::EmptyHead);
        }
        Ok(Rule {
            head: normalize(head),
            body_pos: normalize(body_pos),
            body_neg: normalize(body_neg),
        })
    }

    pub fn head(&self) -> &[Atom] {
        &self.head
    }

    pub fn body_pos(&self) -> &[Atom] {
        &self.body_pos
    }

    /// The atoms under `not`, i.e. `K(body-)`.
    pub fn body_neg(&self) -> &[Atom] {
        &self.body_neg
    }

    pub fn is_normal(&self) -> bool {
        self.head.len() == 1
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.head
            .iter()
            .chain(&self.body_pos)
            .chain(&self.body_neg)
            .copied()
    }

    pub fn head_intersects(&self, set: &AtomSet) -> bool {
        self.head.iter().any(|&a| set.contains(a))
    }

    pub fn body_pos_intersects(&self, set: &AtomSet) -> bool {
        self.body_pos.iter().any(|&a| set.contains(a))
    }

    pub fn body_neg_intersects(&self, set: &AtomSet) -> bool {
        self.body_neg.iter().any(|&a| set.contains(a))
    }

    pub fn body_pos_within(&self, set: &AtomSet) -> bool {
        self.body_pos.iter().all(|&a| set.contains(a))
    }
}

/// `KA(P)`: every atom occurring in a head or a body of some rule.
pub fn ka_of(rules: &[Rule]) -> AtomSet {
    rules.iter().flat_map(Rule::atoms).collect()
}

/// Whether `body(r) ⊑ (T, F)`.
pub fn applicable(rule: &Rule, p: &Partition) -> bool {
    rule.body_pos.iter().all(|&a| p.t.contains(a)) && rule.body_neg.iter().all(|&a| p.f.contains(a))
}

/// A ground hybrid knowledge base `(O, P)` over a shared atom table.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    atoms: AtomTable,
    rules: Vec<Rule>,
    ontology: ClausalOntology,
    ka: AtomSet,
}

impl KnowledgeBase {
    /// Builds a knowledge base. Every atom mentioned by a rule or clause must
    /// already be interned in `atoms`.
    pub fn new(
        atoms: AtomTable,
        rules: Vec<Rule>,
        ontology: ClausalOntology,
    ) -> Result<Self, Error> {
        let n = atoms.len();
        let out_of_table = rules
            .iter()
            .flat_map(Rule::atoms)
            .chain(ontology.vocabulary().iter())
            .find(|a| a.index() >= n);
        if let Some(atom) = out_of_table {
            return Err(Error::UnknownAtomId(atom.index()));
        }
        let ka = ka_of(&rules);
        Ok(KnowledgeBase {
            atoms,
            rules,
            ontology,
            ka,
        })
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn ontology(&self) -> &ClausalOntology {
        &self.ontology
    }

    /// `KA(K)`.
    pub fn ka(&self) -> &AtomSet {
        &self.ka
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_normal(&self) -> bool {
        self.rules.iter().all(Rule::is_normal)
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.atoms.get(name)
    }

    pub fn name(&self, atom: Atom) -> &str {
        self.atoms.name(atom)
    }

    /// Looks up a list of names, failing on the first unknown one.
    pub fn atom_set<'a, I>(&self, names: I) -> Result<AtomSet, Error>
    where
        I: IntoIterator<Item = &'a str>,
    {
        names
            .into_iter()
            .map(|n| {
                self.atom(n)
                    .ok_or_else(|| Error::UnknownAtom(n.to_string()))
            })
            .collect()
    }

    /// Member names sorted alphabetically.
    pub fn names(&self, set: &AtomSet) -> Vec<String> {
        let mut names: Vec<String> = set.iter().map(|a| self.name(a).to_string()).collect();
        names.sort();
        names
    }

    pub fn empty_set(&self) -> AtomSet {
        AtomSet::with_capacity(self.num_atoms())
    }

    /// Builds a partition of `KA(K)` from atom names.
    pub fn partition<'a, I, J>(&self, t: I, f: J) -> Result<Partition, Error>
    where
        I: IntoIterator<Item = &'a str>,
        J: IntoIterator<Item = &'a str>,
    {
        let t = self.atom_set(t)?;
        let f = self.atom_set(f)?;
        if let Some(a) = t.union(&f).iter().find(|&a| !self.ka.contains(a)) {
            return Err(Error::NotInKa(self.name(a).to_string()));
        }
        Partition::new(t, f).map_err(|c| Error::Overlap(self.names(&c.atoms)))
    }
}

/// Atoms assigned both true and false by a join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub atoms: AtomSet,
}

/// A non-overlapping pair `(T, F)` of K-atom sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    t: AtomSet,
    f: AtomSet,
}

impl Partition {
    pub fn new(t: AtomSet, f: AtomSet) -> Result<Self, Conflict> {
        let overlap = t.intersection(&f);
        if overlap.is_empty() {
            Ok(Partition { t, f })
        } else {
            Err(Conflict { atoms: overlap })
        }
    }

    pub fn empty() -> Self {
        Partition {
            t: AtomSet::new(),
            f: AtomSet::new(),
        }
    }

    pub fn t(&self) -> &AtomSet {
        &self.t
    }

    pub fn f(&self) -> &AtomSet {
        &self.f
    }

    pub fn into_parts(self) -> (AtomSet, AtomSet) {
        (self.t, self.f)
    }

    pub fn is_decided(&self, atom: Atom) -> bool {
        self.t.contains(atom) || self.f.contains(atom)
    }

    /// Total w.r.t. `ka` when every atom of `ka` is assigned.
    pub fn is_total(&self, ka: &AtomSet) -> bool {
        ka.iter().all(|a| self.is_decided(a))
    }

    /// `self ⊑ other`, componentwise inclusion.
    pub fn is_below(&self, other: &Partition) -> bool {
        self.t.is_subset(&other.t) && self.f.is_subset(&other.f)
    }

    pub fn with_true(&self, atom: Atom) -> Result<Partition, Conflict> {
        let mut t = self.t.clone();
        t.insert(atom);
        Partition::new(t, self.f.clone())
    }

    pub fn with_false(&self, atom: Atom) -> Result<Partition, Conflict> {
        let mut f = self.f.clone();
        f.insert(atom);
        Partition::new(self.t.clone(), f)
    }
}

/// `p1 ⊔ p2`, or the overlapping atoms when the unions intersect.
pub fn partition_join(p1: &Partition, p2: &Partition) -> Result<Partition, Conflict> {
    Partition::new(p1.t.union(&p2.t), p1.f.union(&p2.f))
}

/// A set of `(rule index, head atom)` pairs.
///
/// A head-cut mentions each rule at most once; a weak head-cut may pick
/// several head atoms of the same rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HeadCut {
    pairs: Vec<(usize, Atom)>,
}

impl HeadCut {
    /// Validates a head-cut: every atom must belong to its rule's head and
    /// no rule may appear twice.
    pub fn new(kb: &KnowledgeBase, pairs: Vec<(usize, Atom)>) -> Result<Self, Error> {
        let cut = Self::weak(kb, pairs)?;
        if cut.pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidHeadCut(
                "a rule occurs in more than one pair".into(),
            ));
        }
        Ok(cut)
    }

    /// Validates a weak head-cut.
    pub fn weak(kb: &KnowledgeBase, mut pairs: Vec<(usize, Atom)>) -> Result<Self, Error> {
        for &(r, h) in &pairs {
            let rule = kb
                .rules()
                .get(r)
                .ok_or_else(|| Error::InvalidHeadCut(format!("no rule with index {r}")))?;
            if !rule.head().contains(&h) {
                return Err(Error::InvalidHeadCut(format!(
                    "atom {} is not in the head of rule {r}",
                    kb.name(h)
                )));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(HeadCut { pairs })
    }

    pub(crate) fn from_sorted_pairs(pairs: Vec<(usize, Atom)>) -> Self {
        HeadCut { pairs }
    }

    pub fn pairs(&self) -> &[(usize, Atom)] {
        &self.pairs
    }

    /// `head(R)`.
    pub fn heads(&self) -> AtomSet {
        self.pairs.iter().map(|&(_, h)| h).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.pairs.windows(2).all(|w| w[0].0 != w[1].0)
    }
}
