//! Time evolution: `U(t)`, `M(t)` and finite-time Cesàro averages.

use std::ops::{Index, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{RealMatrix, SpectralDecomposition};

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        ComplexMatrix { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let data = (0..n * n).map(|k| self.data[(k % n) * n + k / n].conj()).collect();
        ComplexMatrix { n, data }
    }

    /// `‖U U* − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let product = self * &self.adjoint();
        let identity = ComplexMatrix::identity(self.n);
        product
            .data
            .iter()
            .zip(&identity.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Entrywise squared modulus `U ∘ conj(U)`.
    pub fn modulus_squared(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n, |i, j| self.data[i * self.n + j].norm_sqr())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "multiplying matrices of different orders");
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        ComplexMatrix { n, data }
    }
}

/// `U(t) = exp(itB) = Σ_r e^{iθ_r t} E_r`.
pub fn transition_matrix(d: &SpectralDecomposition, t: f64) -> ComplexMatrix {
    let n = d.order();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for (theta, e) in d.iter() {
        let phase = Complex64::cis(theta * t);
        for (z, &x) in data.iter_mut().zip(e.as_slice()) {
            *z += phase * x;
        }
    }
    ComplexMatrix { n, data }
}

/// `M(t)`, whose `(u, v)` entry is the probability of moving from `u` to `v` at time `t`.
pub fn mixing_matrix_at(d: &SpectralDecomposition, t: f64) -> RealMatrix {
    transition_matrix(d, t).modulus_squared()
}

/// `(1/T) ∫₀ᵀ M(t) dt`, evaluated exactly.
///
/// Expanding `M(t) = Σ_{r,s} e^{i(θ_r − θ_s)t} E_r ∘ E_s` and integrating
/// term by term, the pair `{r, s}` contributes `2 sin(Δ T)/(Δ T) · E_r ∘ E_s`
/// with `Δ = θ_r − θ_s`; the diagonal terms give `M̂`.
pub fn cesaro_average(d: &SpectralDecomposition, horizon: f64) -> Result<RealMatrix> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Domain(format!("averaging horizon must be positive, got {horizon}")));
    }
    let parts = d.idempotents();
    let thetas = d.eigenvalues();
    let mut m = RealMatrix::zeros(d.order());
    for (r, e) in parts.iter().enumerate() {
        m = &m + &e.schur(e);
        for s in r + 1..parts.len() {
            let x = (thetas[r] - thetas[s]) * horizon;
            m = &m + &e.schur(&parts[s]).scale(2.0 * x.sin() / x);
        }
    }
    Ok(m)
}

/// Upper bound on `‖cesaro_average(d, T) − M̂‖_max`.
///
/// Each of the `k(k − 1)` off-diagonal terms has modulus at most
/// `2/(δT) · max_r ‖E_r‖²_max`, where `k` counts distinct eigenvalues and `δ`
/// is the smallest gap; the bound uses `k²` pairs.
pub fn cesaro_error_bound(d: &SpectralDecomposition, horizon: f64) -> f64 {
    let Some(gap) = d.min_gap() else {
        return 0.0;
    };
    let k = d.len() as f64;
    let emax = d.idempotents().iter().map(RealMatrix::max_abs).fold(0.0, f64::max);
    2.0 * k * k * emax * emax / (gap * horizon)
}
