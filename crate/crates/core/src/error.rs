use std::fmt;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the exact linear algebra kernels, graph parsers and
/// controllability checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operand shapes do not conform for the requested operation.
    DimensionMismatch(String),
    /// A Laplacian was requested for a graph carrying self-loops.
    SelfLoopPresent(usize),
    /// A Jordan chain was requested for a scalar that is not an eigenvalue.
    NotAnEigenvalue(String),
    /// The characteristic polynomial does not split over the rationals, so
    /// the structured eigenvector path cannot certify a verdict.
    IrrationalSpectrum,
    /// The diagonalizable fast path needs at least one diagonalizable factor.
    NeitherFactorDiagonalizable,
    /// Row sums of a coupling Laplacian are not zero.
    NotDiffusive(usize),
    /// Text input could not be parsed; `line` is 1-based.
    Parse { line: usize, msg: String },
    /// Structurally invalid graph or selection data.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::SelfLoopPresent(node) => {
                write!(f, "graph has a self-loop on node {node}; Laplacian undefined")
            }
            Error::NotAnEigenvalue(value) => write!(f, "{value} is not an eigenvalue"),
            Error::IrrationalSpectrum => {
                write!(f, "spectrum does not fully factor over the rationals")
            }
            Error::NeitherFactorDiagonalizable => {
                write!(f, "neither factor matrix is diagonalizable")
            }
            Error::NotDiffusive(row) => {
                write!(f, "row {row} of the Laplacian does not sum to zero")
            }
            Error::Parse { line, msg } => write!(f, "line {line}: {msg}"),
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}
