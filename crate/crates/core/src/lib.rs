//! Average mixing matrices of continuous quantum walks on graphs.
//!
//! A continuous quantum walk with Hamiltonian `B` (the adjacency matrix or the
//! Laplacian of a graph) evolves by `U(t) = exp(itB)`. Its mixing matrix
//! `M(t) = U(t) ∘ conj(U(t))` oscillates forever, but the Cesàro average
//! converges to the *average mixing matrix*
//!
//! ```text
//! M̂ = Σ_r E_r ∘ E_r
//! ```
//!
//! where `B = Σ_r θ_r E_r` is the spectral decomposition of `B`.
//!
//! The crate is organised as:
//!
//! * [`graphs`]: simple graphs, graph6 I/O, constructions, equitable
//!   partitions and exhaustive enumeration of small graphs.
//! * [`spectral`]: dense symmetric eigendecomposition and spectral idempotents.
//! * [`mixing`]: the average mixing matrix, closed forms, orderings and
//!   structural predicates.
//! * [`survey`]: corpus scans that tabulate traces and constant-diagonal counts.
//! * [`check`]: the full per-graph validation used by the `check` command.
//! * [`rational`]: continued-fraction reconstruction of reported floats.

pub mod check;
pub mod error;
pub mod graphs;
pub mod mixing;
pub mod rational;
pub mod spectral;
pub mod survey;

pub use error::{Error, Result};
pub use graphs::{Graph, HamiltonianKind, VertexPartition};
pub use mixing::AverageMixingMatrix;
pub use spectral::{RealMatrix, SpectralDecomposition};

/// Default relative tolerance used to group numerically equal eigenvalues.
pub const DEFAULT_TOL_CLUSTER: f64 = 1e-8;

/// Default absolute tolerance for structural predicates.
pub const DEFAULT_TOL_CHECK: f64 = 1e-8;
