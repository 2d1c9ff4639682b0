//! Spectral decompositions `B = Σ_r θ_r E_r` of graph Hamiltonians.
//!
//! Eigenvalues from the numeric kernel are grouped into distinct eigenvalues
//! by a relative tolerance, and each group's eigenvectors are summed into the
//! orthogonal projection `E_r` onto that eigenspace. Downstream code only
//! consumes the `E_r`, which do not depend on the choice of eigenbasis.

mod eigen;
mod matrix;

use serde::Serialize;

pub use eigen::{sym_eigendecomposition, sym_eigenvalues, SymmetricEigen, SYMMETRY_TOL};
pub use matrix::RealMatrix;

use crate::error::{Error, Result};
use crate::graphs::{Graph, HamiltonianKind};

/// Groups ascending `values` into chains whose consecutive gaps are at most
/// `tol_cluster · max(1, value range)`.
pub fn cluster_eigenvalues(values: &[f64], tol_cluster: f64) -> Vec<Vec<usize>> {
    let Some((&first, &last)) = values.first().zip(values.last()) else {
        return Vec::new();
    };
    let gap = tol_cluster * (last - first).max(1.0);
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..values.len() {
        if values[i] - values[i - 1] <= gap {
            groups.last_mut().expect("nonempty").push(i);
        } else {
            groups.push(vec![i]);
        }
    }
    groups
}

/// Distinct eigenvalues with their spectral idempotents.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    kind: HamiltonianKind,
    thetas: Vec<f64>,
    idempotents: Vec<RealMatrix>,
    mults: Vec<usize>,
}

impl SpectralDecomposition {
    /// Decomposes the symmetric matrix `b`, clustering with `tol_cluster`.
    pub fn from_matrix(kind: HamiltonianKind, b: &RealMatrix, tol_cluster: f64) -> Result<Self> {
        if tol_cluster.is_nan() || tol_cluster <= 0.0 {
            return Err(Error::Domain(format!("tol_cluster must be positive, got {tol_cluster}")));
        }
        let eig = sym_eigendecomposition(b)?;
        let n = b.order();
        let groups = cluster_eigenvalues(&eig.values, tol_cluster);
        let mut thetas = Vec::with_capacity(groups.len());
        let mut idempotents = Vec::with_capacity(groups.len());
        let mut mults = Vec::with_capacity(groups.len());
        for group in groups {
            let mean = group.iter().map(|&k| eig.values[k]).sum::<f64>() / group.len() as f64;
            let mut e = RealMatrix::zeros(n);
            for &k in &group {
                let x = eig.vector(k);
                for i in 0..n {
                    for j in i..n {
                        let p = x[i] * x[j];
                        e[(i, j)] += p;
                        if i != j {
                            e[(j, i)] += p;
                        }
                    }
                }
            }
            thetas.push(mean);
            idempotents.push(e);
            mults.push(group.len());
        }
        Ok(SpectralDecomposition {
            kind,
            thetas,
            idempotents,
            mults,
        })
    }

    /// Assembles a decomposition from precomputed parts.
    ///
    /// Checks only shape: equal list lengths, a common order, strictly
    /// increasing eigenvalues and positive multiplicities summing to the
    /// order. Use [`validate_decomposition`] for the algebraic checks.
    pub fn from_parts(
        kind: HamiltonianKind,
        thetas: Vec<f64>,
        idempotents: Vec<RealMatrix>,
        mults: Vec<usize>,
    ) -> Result<Self> {
        if thetas.len() != idempotents.len() || thetas.len() != mults.len() || thetas.is_empty() {
            return Err(Error::Invariant(
                "eigenvalues, idempotents and multiplicities must be nonempty and of equal length"
                    .into(),
            ));
        }
        let n = idempotents[0].order();
        if let Some(e) = idempotents.iter().find(|e| e.order() != n) {
            return Err(Error::Dimension(e.order(), n));
        }
        if !thetas.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invariant("eigenvalues must be strictly increasing".into()));
        }
        if mults.contains(&0) || mults.iter().sum::<usize>() != n {
            return Err(Error::Invariant(format!(
                "multiplicities {mults:?} must be positive and sum to {n}"
            )));
        }
        Ok(SpectralDecomposition {
            kind,
            thetas,
            idempotents,
            mults,
        })
    }

    pub fn kind(&self) -> HamiltonianKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.idempotents[0].order()
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.thetas
    }

    pub fn idempotents(&self) -> &[RealMatrix] {
        &self.idempotents
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mults
    }

    /// `(θ_r, E_r)` pairs in increasing eigenvalue order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &RealMatrix)> {
        self.thetas.iter().copied().zip(&self.idempotents)
    }

    /// Smallest gap between consecutive distinct eigenvalues, if there are two.
    pub fn min_gap(&self) -> Option<f64> {
        self.thetas.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
    }

    /// `Σ_r θ_r E_r`.
    pub fn reconstruct(&self) -> RealMatrix {
        let mut b = RealMatrix::zeros(self.order());
        for (theta, e) in self.iter() {
            b = &b + &e.scale(theta);
        }
        b
    }

    /// Index of the cluster whose eigenvalue is within `tol` of `value`.
    pub fn position_of(&self, value: f64, tol: f64) -> Option<usize> {
        self.thetas.iter().position(|t| (t - value).abs() <= tol)
    }
}

/// Decomposition of the chosen Hamiltonian of `g`.
pub fn spectral_decomposition(
    g: &Graph,
    kind: HamiltonianKind,
    tol_cluster: f64,
) -> Result<SpectralDecomposition> {
    SpectralDecomposition::from_matrix(kind, &g.hamiltonian(kind), tol_cluster)
}

/// Residuals of the algebraic identities a spectral decomposition must satisfy.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// max_r ‖E_r² − E_r‖_max
    pub idempotency: f64,
    /// max_r ‖E_r − E_rᵀ‖_max
    pub symmetry: f64,
    /// max_{r≠s} ‖E_r E_s‖_max
    pub orthogonality: f64,
    /// ‖Σ_r E_r − I‖_max
    pub resolution: f64,
    /// ‖Σ_r θ_r E_r − B‖_max / max(1, ρ(B))
    pub reconstruction: f64,
    /// Clusters whose rounded trace differs from the recorded multiplicity.
    pub rank_mismatches: Vec<usize>,
    /// Smallest distance between distinct eigenvalues, for judging clustering.
    pub min_gap: Option<f64>,
    pub eps: f64,
    pub passed: bool,
}

pub fn validate_decomposition(
    d: &SpectralDecomposition,
    b: &RealMatrix,
    eps: f64,
) -> Result<ValidationReport> {
    let n = d.order();
    if b.order() != n {
        return Err(Error::Dimension(b.order(), n));
    }
    let identity = RealMatrix::identity(n);
    let mut idempotency = 0.0f64;
    let mut symmetry = 0.0f64;
    let mut orthogonality = 0.0f64;
    let mut sum = RealMatrix::zeros(n);
    let mut rank_mismatches = Vec::new();
    for (r, e) in d.idempotents.iter().enumerate() {
        idempotency = idempotency.max((&(e * e) - e).max_abs());
        symmetry = symmetry.max(e.asymmetry());
        for f in &d.idempotents[r + 1..] {
            orthogonality = orthogonality.max((e * f).max_abs());
        }
        if e.trace().round() as i64 != d.mults[r] as i64 {
            rank_mismatches.push(r);
        }
        sum = &sum + e;
    }
    let resolution = sum.max_abs_diff(&identity);
    let radius = sym_eigenvalues(b)?
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let reconstruction = d.reconstruct().max_abs_diff(b) / radius.max(1.0);
    let passed = [idempotency, symmetry, orthogonality, resolution, reconstruction]
        .iter()
        .all(|&x| x <= eps)
        && rank_mismatches.is_empty();
    Ok(ValidationReport {
        idempotency,
        symmetry,
        orthogonality,
        resolution,
        reconstruction,
        rank_mismatches,
        min_gap: d.min_gap(),
        eps,
        passed,
    })
}

/// True iff every `fine` eigenspace lies inside or orthogonal to every
/// `coarse` eigenspace, i.e. each coarse idempotent is a sum of fine ones.
pub fn refines(fine: &SpectralDecomposition, coarse: &SpectralDecomposition, eps: f64) -> Result<bool> {
    idempotents_refine(fine.idempotents(), coarse.idempotents(), eps)
}

/// [`refines`] on bare lists of orthogonal projections.
pub fn idempotents_refine(fine: &[RealMatrix], coarse: &[RealMatrix], eps: f64) -> Result<bool> {
    let n = fine.first().map_or(0, RealMatrix::order);
    if let Some(m) = fine.iter().chain(coarse).find(|m| m.order() != n) {
        return Err(Error::Dimension(m.order(), n));
    }
    Ok(fine.iter().all(|e| {
        coarse.iter().all(|f| {
            let fe = f * e;
            (&fe - e).max_abs().min(fe.max_abs()) <= eps
        })
    }))
}
