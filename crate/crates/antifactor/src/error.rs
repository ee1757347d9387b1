//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors reported by constructors and solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Self-loops are rejected: the degree contribution would be ambiguous.
    SelfLoop { v: usize },
    /// A vertex id is outside `0..n`.
    VertexOutOfRange { v: usize, n: usize },
    /// An edge id is outside `0..m`.
    EdgeOutOfRange { e: usize, m: usize },
    /// Constraint lists do not cover exactly the graph's vertices.
    ConstraintCount { got: usize, expected: usize },
    /// The allowed-degree set of a factor instance must be nonempty.
    EmptyAllowedSet,
    /// The brute-force oracle refuses instances with too many edges.
    BudgetExceeded { size: usize, budget: usize },
    /// A tree decomposition failed validation.
    InvalidDecomposition(String),
    /// A nice decomposition does not match the instance it is used with.
    DecompositionMismatch(String),
    /// The packed DP state space does not fit the key type.
    StateSpaceTooLarge { radix: u64, bag: usize },
    /// Tables passed to a join have different bags.
    BagMismatch,
    /// The field is too small for the vector universe.
    FieldTooSmall { p: u64, needed: u64 },
    /// Search horizon or value bound is too small for the requested quantity.
    HorizonTooSmall { horizon: u32, needed: u32 },
    /// A half-induced matching witness failed verification.
    InvalidWitness(String),
    /// Constraints are not of the form required by a specialized algorithm.
    UnsupportedConstraints(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SelfLoop { v } => write!(f, "self-loop at vertex {v}"),
            Error::VertexOutOfRange { v, n } => write!(f, "vertex {v} out of range (n={n})"),
            Error::EdgeOutOfRange { e, m } => write!(f, "edge {e} out of range (m={m})"),
            Error::ConstraintCount { got, expected } => {
                write!(f, "constraints cover {got} vertices, graph has {expected}")
            }
            Error::EmptyAllowedSet => write!(f, "allowed-degree set B must be nonempty"),
            Error::BudgetExceeded { size, budget } => {
                write!(f, "size {size} exceeds budget {budget}")
            }
            Error::InvalidDecomposition(msg) => write!(f, "invalid tree decomposition: {msg}"),
            Error::DecompositionMismatch(msg) => write!(f, "decomposition mismatch: {msg}"),
            Error::StateSpaceTooLarge { radix, bag } => {
                write!(f, "state space {radix}^{bag} does not fit a packed key")
            }
            Error::BagMismatch => write!(f, "tables have different bags"),
            Error::FieldTooSmall { p, needed } => {
                write!(f, "field size {p} too small, need > {needed}")
            }
            Error::HorizonTooSmall { horizon, needed } => {
                write!(f, "horizon {horizon} too small, need >= {needed}")
            }
            Error::InvalidWitness(msg) => write!(f, "invalid witness: {msg}"),
            Error::UnsupportedConstraints(msg) => write!(f, "unsupported constraints: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
