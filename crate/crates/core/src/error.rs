use thiserror::Error;

use crate::cli::ParseError;
use crate::reduction::DimacsError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    #[error("atom id {0} is not in the atom table")]
    UnknownAtomId(usize),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("atom `{0}` does not occur in any rule")]
    NotInKa(String),
    #[error("atoms assigned both true and false: {}", .0.join(", "))]
    Overlap(Vec<String>),
    #[error("rule head must contain at least one atom")]
    EmptyHead,
    #[error("clause must contain at least one literal")]
    EmptyClause,
    #[error("clause contains both `{0}` and `-{0}`")]
    TautologicalClause(String),
    #[error("invalid head-cut: {0}")]
    InvalidHeadCut(String),
    #[error("partition is not total: {0} atoms undecided")]
    NotTotal(usize),
    #[error("{what}: search space of {size} exceeds the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Dimacs(#[from] DimacsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
