use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: negative edge weight {weight}")]
    NegativeWeight { line: usize, weight: i64 },

    #[error("line {line}: vertex id {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: u64, n: usize },

    #[error("line {line}: undirected edge ({u}, {v}) repeated with conflicting weights {first} and {second}")]
    ConflictingEdge {
        line: usize,
        u: u32,
        v: u32,
        first: u64,
        second: u64,
    },

    #[error("source set is empty")]
    EmptySourceSet,

    #[error("set family contains an empty set at index {0}")]
    EmptySet(usize),

    #[error("graph is not {0}")]
    NotConnected(&'static str),

    #[error("{0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("oracle cap exceeded: n = {n} > cap {cap}")]
    OracleCap { n: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Errors that reject an otherwise well-formed input because an estimator
    /// cannot run on it (directedness, weights, connectivity, oracle size).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotConnected(_) | Error::Precondition(_) | Error::OracleCap { .. }
        )
    }
}
