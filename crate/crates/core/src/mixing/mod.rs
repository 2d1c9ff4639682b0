//! The average mixing matrix and its closed forms, orderings and predicates.

mod closed_forms;
mod properties;
mod walk;

pub use closed_forms::{
    amm_complement_laplacian, amm_rooted_k2_closed, equitable_trace_bound, is_walk_regular,
    kn_amm, kn_trace, rooted_k2_idempotents, trace_complement_laplacian,
};
pub use properties::{
    constant_diagonal_gram_check, matrix_properties, min_eigenvalue, psd_order, MatrixProperties,
};
pub use walk::{
    cesaro_average, cesaro_error_bound, mixing_matrix_at, transition_matrix, ComplexMatrix,
};

use crate::error::Result;
use crate::graphs::{Graph, HamiltonianKind};
use crate::spectral::{spectral_decomposition, RealMatrix, SpectralDecomposition};

/// `M̂ = Σ_r E_r ∘ E_r` together with the Hamiltonian it was computed for.
#[derive(Debug, Clone)]
pub struct AverageMixingMatrix {
    kind: HamiltonianKind,
    matrix: RealMatrix,
}

impl AverageMixingMatrix {
    /// Decomposes the chosen Hamiltonian of `g` and averages.
    pub fn of_graph(g: &Graph, kind: HamiltonianKind, tol_cluster: f64) -> Result<Self> {
        Ok(average_mixing_matrix(&spectral_decomposition(g, kind, tol_cluster)?))
    }

    pub fn kind(&self) -> HamiltonianKind {
        self.kind
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn trace(&self) -> f64 {
        trace_amm(self)
    }

    pub fn properties(&self, eps: f64) -> MatrixProperties {
        matrix_properties(&self.matrix, eps)
    }
}

pub fn average_mixing_matrix(d: &SpectralDecomposition) -> AverageMixingMatrix {
    let mut matrix = RealMatrix::zeros(d.order());
    for e in d.idempotents() {
        matrix = &matrix + &e.schur(e);
    }
    AverageMixingMatrix {
        kind: d.kind(),
        matrix,
    }
}

pub fn trace_amm(m: &AverageMixingMatrix) -> f64 {
    m.matrix.trace()
}
