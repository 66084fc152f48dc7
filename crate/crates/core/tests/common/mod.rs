//! Seeded random instances and brute-force helpers shared by the integration
//! tests and the acceptance suite.
#![allow(dead_code)]

use std::path::PathBuf;

use hmknf::cli::parse_kb;
use hmknf::ontology::is_dependable;
use hmknf::reduction::CnfInstance;
use hmknf::unfounded::is_unfounded_set;
use hmknf::{AtomSet, KnowledgeBase, Partition};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> KnowledgeBase {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    parse_kb(&text).unwrap().into_kb()
}

pub fn kb(text: &str) -> KnowledgeBase {
    parse_kb(text).unwrap().into_kb()
}

pub fn set(kb: &KnowledgeBase, names: &[&str]) -> AtomSet {
    kb.atom_set(names.iter().copied()).unwrap()
}

pub fn part(kb: &KnowledgeBase, t: &[&str], f: &[&str]) -> Partition {
    kb.partition(t.iter().copied(), f.iter().copied()).unwrap()
}

/// Text of a random knowledge base: at most 6 rule atoms, 1 to 5 rules with
/// 1 to 3 head atoms and up to 2 positive and 2 negative body atoms, and up
/// to 4 clauses of 1 to 3 literals (which may mention one extra atom `o`).
pub fn random_kb_text(rng: &mut StdRng) -> String {
    let pool: Vec<String> = (0..rng.gen_range(1..=6)).map(|i| format!("x{i}")).collect();
    let mut text = String::new();
    for _ in 0..rng.gen_range(1..=5) {
        let size = rng.gen_range(1..=3);
        let head: Vec<&String> = pool.choose_multiple(rng, size).collect();
        let mut body: Vec<String> = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            body.push(pool.choose(rng).unwrap().clone());
        }
        for _ in 0..rng.gen_range(0..=2) {
            body.push(format!("not {}", pool.choose(rng).unwrap()));
        }
        let head: Vec<&str> = head.iter().map(|s| s.as_str()).collect();
        text += &head.join(" ; ");
        if !body.is_empty() {
            text += &format!(" :- {}", body.join(", "));
        }
        text += ".\n";
    }
    let mut vocab = pool.clone();
    vocab.push("o".into());
    for _ in 0..rng.gen_range(0..=4) {
        let size = rng.gen_range(1..=3);
        let atoms: Vec<&String> = vocab.choose_multiple(rng, size).collect();
        let lits: Vec<String> = atoms
            .iter()
            .map(|a| format!("{}{a}", if rng.gen_bool(0.5) { "" } else { "-" }))
            .collect();
        text += &format!("#clause {}.\n", lits.join(" | "));
    }
    text
}

/// Up to `count` distinct dependable partitions of `KA(K)`, each atom drawn
/// true, false or undecided with equal odds.
pub fn random_dependable_partitions(
    kb: &KnowledgeBase,
    rng: &mut StdRng,
    count: usize,
) -> Vec<Partition> {
    let mut out: Vec<Partition> = Vec::new();
    for _ in 0..count * 8 {
        if out.len() == count {
            break;
        }
        let (mut t, mut f) = (AtomSet::new(), AtomSet::new());
        for a in kb.ka().iter() {
            match rng.gen_range(0..3) {
                0 => {
                    t.insert(a);
                }
                1 => {
                    f.insert(a);
                }
                _ => {}
            }
        }
        let p = Partition::new(t, f).unwrap();
        if is_dependable(kb, &p) && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Subsets of `KA(K)` by bitmask over the atoms of `KA(K)` in id order.
pub fn subset(ka: &[hmknf::Atom], mask: usize) -> AtomSet {
    ka.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &a)| a)
        .collect()
}

/// `pass[mask]`: whether the subset `mask` is an unfounded set w.r.t. `p`.
pub fn unfounded_table(kb: &KnowledgeBase, p: &Partition) -> Vec<bool> {
    let ka = kb.ka().to_vec();
    (0..1usize << ka.len())
        .map(|mask| {
            is_unfounded_set(kb, p, &subset(&ka, mask))
                .unwrap()
                .unfounded
        })
        .collect()
}

/// A random sub-partition `(T, F) ⊑ model`.
pub fn random_sub_partition(model: &Partition, rng: &mut StdRng) -> Partition {
    let t: AtomSet = model.t().iter().filter(|_| rng.gen_bool(0.5)).collect();
    let f: AtomSet = model.f().iter().filter(|_| rng.gen_bool(0.5)).collect();
    Partition::new(t, f).unwrap()
}

/// A random CNF with 1 to `max_vars` variables and 1 to `max_clauses`
/// clauses of 1 to 3 literals.
pub fn random_cnf(rng: &mut StdRng, max_vars: usize, max_clauses: usize) -> CnfInstance {
    let n = rng.gen_range(1..=max_vars);
    random_cnf_with_vars(rng, n, max_clauses)
}

/// A random CNF over exactly `n` variables.
pub fn random_cnf_with_vars(rng: &mut StdRng, n: usize, max_clauses: usize) -> CnfInstance {
    let clauses = (0..rng.gen_range(1..=max_clauses))
        .map(|_| {
            (0..rng.gen_range(1..=3))
                .map(|_| {
                    let v = rng.gen_range(1..=n as i32);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    CnfInstance::new(n, clauses).unwrap()
}
