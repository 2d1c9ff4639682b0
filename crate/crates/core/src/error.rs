use thiserror::Error;

use crate::graphs::HamiltonianKind;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph6 parse error: {0}")]
    Parse(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    Symmetry(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    Convergence(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operation requires an adjacency decomposition, got {0}")]
    Kind(HamiltonianKind),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
