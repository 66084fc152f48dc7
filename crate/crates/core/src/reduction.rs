//! 3SAT encoders that turn a CNF formula into a knowledge base in which
//! `sat` is unfounded w.r.t. `(∅, ∅)` exactly when the formula is
//! unsatisfiable. Useful as hard test instances for the unfounded-set
//! machinery.

use thiserror::Error;

use crate::kb::{Atom, AtomTable, KnowledgeBase, Rule};
use crate::ontology::{ClausalOntology, Clause, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DimacsError {
    pub line: usize,
    pub message: String,
}

impl DimacsError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        DimacsError {
            line,
            message: message.into(),
        }
    }
}

/// A CNF formula with clauses of one to three literals. Literal `i` stands for
/// variable `i` and `-i` for its negation, variables being numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, DimacsError> {
        if num_vars == 0 {
            return Err(DimacsError::new(0, "at least one variable is required"));
        }
        for (j, clause) in clauses.iter().enumerate() {
            if clause.is_empty() || clause.len() > 3 {
                return Err(DimacsError::new(
                    0,
                    format!(
                        "clause {} has {} literals, expected 1 to 3",
                        j + 1,
                        clause.len()
                    ),
                ));
            }
            if let Some(&l) = clause
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars)
            {
                return Err(DimacsError::new(0, format!("literal {l} out of range")));
            }
        }
        Ok(CnfInstance { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Satisfiability, decided by the ontology solver over variables
    /// `0..num_vars`. Tautological clauses are dropped.
    pub fn is_satisfiable(&self) -> bool {
        let clauses = self
            .clauses
            .iter()
            .filter_map(|c| {
                Clause::new(
                    c.iter()
                        .map(|&l| Literal {
                            atom: Atom::new(l.unsigned_abs() as usize - 1),
                            positive: l > 0,
                        })
                        .collect(),
                )
                .ok()
            })
            .collect();
        ClausalOntology::new(clauses).sat(&[])
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                out += &format!("{l} ");
            }
            out += "0\n";
        }
        out
    }
}

/// Reads DIMACS CNF: `c` comment lines, a `p cnf VARS CLAUSES` header, then
/// zero-terminated clauses that may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::new(lineno, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(
                parsed.ok_or_else(|| DimacsError::new(lineno, "expected `p cnf VARS CLAUSES`"))?,
            );
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::new(lineno, "clause before `p cnf` header"));
        };
        for token in line.split_whitespace() {
            let l: i32 = token
                .parse()
                .map_err(|_| DimacsError::new(lineno, format!("malformed literal `{token}`")))?;
            if l == 0 {
                if current.is_empty() {
                    return Err(DimacsError::new(lineno, "empty clause"));
                }
                if current.len() > 3 {
                    return Err(DimacsError::new(lineno, "clause has more than 3 literals"));
                }
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > num_vars {
                return Err(DimacsError::new(
                    lineno,
                    format!("literal {l} exceeds {num_vars} variables"),
                ));
            } else {
                current.push(l);
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(DimacsError::new(last_line, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(DimacsError::new(
            last_line,
            "last clause is not terminated by 0",
        ));
    }
    if clauses.len() != num_clauses {
        return Err(DimacsError::new(
            last_line,
            format!(
                "header announces {num_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    CnfInstance::new(num_vars, clauses).map_err(|e| DimacsError::new(last_line, e.message))
}

struct Var {
    t: Atom,
    f: Atom,
    u: Atom,
}

struct Builder {
    atoms: AtomTable,
    rules: Vec<Rule>,
    clauses: Vec<Clause>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            atoms: AtomTable::new(),
            rules: Vec::new(),
            clauses: Vec::new(),
        }
    }

    fn atom(&mut self, name: &str) -> Atom {
        self.atoms.intern(name).expect("generated names are valid")
    }

    fn vars(&mut self, n: usize) -> Vec<Var> {
        (1..=n)
            .map(|i| Var {
                t: self.atom(&format!("v{i}_t")),
                f: self.atom(&format!("v{i}_f")),
                u: self.atom(&format!("v{i}_u")),
            })
            .collect()
    }

    fn rule(&mut self, head: Vec<Atom>, pos: Vec<Atom>, neg: Vec<Atom>) {
        self.rules
            .push(Rule::new(head, pos, neg).expect("non-empty head"));
    }

    fn clause(&mut self, literals: Vec<Literal>) {
        self.clauses
            .push(Clause::new(literals).expect("generated clauses are proper"));
    }

    fn finish(self) -> KnowledgeBase {
        KnowledgeBase::new(self.atoms, self.rules, ClausalOntology::new(self.clauses))
            .expect("all atoms are interned")
    }
}

/// `v_i` becomes `v_i^t` and `¬v_i` becomes `v_i^f`.
fn substitute(vars: &[Var], l: i32) -> Atom {
    let v = &vars[l.unsigned_abs() as usize - 1];
    if l > 0 {
        v.t
    } else {
        v.f
    }
}

/// Normal encoding. Rules `sat ← sat`, `v_i^t ← not v_i^f` and
/// `v_i^f ← not v_i^t`; the ontology says exactly one of `v_i^u, v_i^f, v_i^t`
/// holds, `total` holds iff no `v_i^u` does, `total ⊃ sat`, and every clause
/// (over `v^t`/`v^f`) holds when `total` does.
pub fn encode_3sat_normal(cnf: &CnfInstance) -> KnowledgeBase {
    use Literal as L;
    let mut b = Builder::new();
    let sat = b.atom("sat");
    let vars = b.vars(cnf.num_vars);
    let total = b.atom("total");

    b.rule(vec![sat], vec![sat], vec![]);
    for v in &vars {
        b.rule(vec![v.t], vec![], vec![v.f]);
        b.rule(vec![v.f], vec![], vec![v.t]);
    }

    for v in &vars {
        // Odd parity of (u, f, t) together with at-most-one: exactly one.
        b.clause(vec![L::pos(v.u), L::pos(v.f), L::pos(v.t)]);
        b.clause(vec![L::neg(v.u), L::neg(v.f), L::pos(v.t)]);
        b.clause(vec![L::neg(v.u), L::pos(v.f), L::neg(v.t)]);
        b.clause(vec![L::pos(v.u), L::neg(v.f), L::neg(v.t)]);
        b.clause(vec![L::neg(v.u), L::neg(v.f)]);
        b.clause(vec![L::neg(v.u), L::neg(v.t)]);
        b.clause(vec![L::neg(v.f), L::neg(v.t)]);
    }

    for v in &vars {
        b.clause(vec![L::neg(total), L::neg(v.u)]);
    }
    let mut some_unknown: Vec<Literal> = vars.iter().map(|v| L::pos(v.u)).collect();
    some_unknown.push(L::pos(total));
    b.clause(some_unknown);
    b.clause(vec![L::neg(total), L::pos(sat)]);

    for c in &cnf.clauses {
        let mut lits: Vec<Literal> = c.iter().map(|&l| L::pos(substitute(&vars, l))).collect();
        lits.push(L::neg(total));
        b.clause(lits);
    }
    b.finish()
}

/// Disjunctive encoding. Rules `sat ← sat` and `v_i^t ; v_i^f ←`; the
/// ontology says exactly one of `v_i^f ∨ v_i^t` and `v_i^u` holds,
/// `v_i^f ∧ v_i^t ⊃ sat`, and that every clause holding (over `v^t`/`v^f`)
/// with no `v_i^u` implies `sat`.
///
/// The last implication is put in clausal form with one auxiliary atom
/// `nc_j` per clause, standing for "clause j is violated".
pub fn encode_3sat_disjunctive(cnf: &CnfInstance) -> KnowledgeBase {
    use Literal as L;
    let mut b = Builder::new();
    let sat = b.atom("sat");
    let vars = b.vars(cnf.num_vars);
    let violated: Vec<Atom> = (1..=cnf.clauses.len())
        .map(|j| b.atom(&format!("nc{j}")))
        .collect();

    b.rule(vec![sat], vec![sat], vec![]);
    for v in &vars {
        b.rule(vec![v.t, v.f], vec![], vec![]);
    }

    for v in &vars {
        b.clause(vec![L::pos(v.f), L::pos(v.t), L::pos(v.u)]);
        b.clause(vec![L::neg(v.u), L::neg(v.f)]);
        b.clause(vec![L::neg(v.u), L::neg(v.t)]);
    }
    for v in &vars {
        b.clause(vec![L::neg(v.f), L::neg(v.t), L::pos(sat)]);
    }

    let mut main: Vec<Literal> = violated.iter().map(|&nc| L::pos(nc)).collect();
    main.extend(vars.iter().map(|v| L::pos(v.u)));
    main.push(L::pos(sat));
    b.clause(main);
    for (c, &nc) in cnf.clauses.iter().zip(&violated) {
        let mut lits: Vec<Atom> = c.iter().map(|&l| substitute(&vars, l)).collect();
        lits.sort();
        lits.dedup();
        for a in lits {
            b.clause(vec![L::neg(nc), L::neg(a)]);
        }
    }
    b.finish()
}
