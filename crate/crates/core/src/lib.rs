//! Unfounded sets, well-founded propagation and model search for ground
//! disjunctive hybrid MKNF knowledge bases over propositional ontologies.
//!
//! A knowledge base pairs rules `h1 ; ... ; hk :- b1, ..., not c1, ...` with
//! an ontology in clausal form. The crate provides:
//!
//! * [`unfounded`]: exact unfounded-set oracles and the polynomial `Atmost`
//!   approximation,
//! * [`propagation`]: the `T`/`W` operators and their fixpoint,
//! * [`solver`]: a DPLL-style search, the model check and a guess-and-verify
//!   reference,
//! * [`reduction`]: 3SAT encoders producing hard instances,
//! * [`cli`]: the text format and the command-line driver.

pub mod cli;
pub mod error;
pub mod kb;
pub mod ontology;
pub mod propagation;
pub mod reduction;
pub mod solver;
pub mod unfounded;

pub use error::{Error, Result};
pub use kb::{Atom, AtomSet, HeadCut, KnowledgeBase, Partition, Rule};
pub use ontology::{ClausalOntology, Clause, Literal};
