//! Cyclic Jacobi eigensolver for dense real symmetric matrices.
//!
//! Each rotation annihilates one off-diagonal pair; sweeps over all pairs are
//! repeated until the off-diagonal mass falls below rounding level. Jacobi is
//! slower than tridiagonal QR for large orders but is accurate to working
//! precision in eigenvalues and orthogonality, which is what the idempotent
//! construction needs at the orders used here (at most 64).

use super::RealMatrix;
use crate::error::{Error, Result};

/// Absolute asymmetry tolerated in inputs.
pub const SYMMETRY_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub vectors: RealMatrix,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        let n = self.vectors.order();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }
}

pub fn sym_eigendecomposition(m: &RealMatrix) -> Result<SymmetricEigen> {
    jacobi(m, true)
}

/// Eigenvalues only, ascending.
pub fn sym_eigenvalues(m: &RealMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|e| e.values)
}

fn jacobi(m: &RealMatrix, want_vectors: bool) -> Result<SymmetricEigen> {
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL || asym.is_nan() {
        return Err(Error::Symmetry(asym));
    }
    let n = m.order();
    let mut a: Vec<f64> = m.as_slice().to_vec();
    // symmetrize to remove any sub-tolerance skew
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = s;
            a[j * n + i] = s;
        }
    }
    let mut v = if want_vectors {
        RealMatrix::identity(n).as_slice().to_vec()
    } else {
        Vec::new()
    };

    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * scale;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate_columns(&mut a, n, p, q, c, s);
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if want_vectors {
                    rotate_columns(&mut v, n, p, q, c, s);
                }
            }
        }
    }
    if !converged {
        return Err(Error::Convergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = if want_vectors {
        RealMatrix::from_fn(n, |i, k| v[i * n + order[k]])
    } else {
        RealMatrix::zeros(0)
    };
    Ok(SymmetricEigen { values, vectors })
}

fn rotate_columns(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, HamiltonianKind};
    use proptest::prelude::*;

    fn residuals(m: &RealMatrix, e: &SymmetricEigen) -> (f64, f64) {
        let n = m.order();
        let mut worst_res = 0.0f64;
        for k in 0..n {
            let x = e.vector(k);
            let r = (0..n)
                .map(|i| {
                    let mx: f64 = (0..n).map(|j| m[(i, j)] * x[j]).sum();
                    (mx - e.values[k] * x[i]).powi(2)
                })
                .sum::<f64>()
                .sqrt();
            worst_res = worst_res.max(r);
        }
        let gram = &e.vectors.transpose() * &e.vectors;
        (worst_res, gram.max_abs_diff(&RealMatrix::identity(n)))
    }

    #[test]
    fn small_spectra() {
        let swap = RealMatrix::from_row_major(vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = sym_eigendecomposition(&swap).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);

        let lk3 = Graph::complete(3).unwrap().hamiltonian(HamiltonianKind::Laplacian);
        let vals = sym_eigenvalues(&lk3).unwrap();
        for (got, want) in vals.iter().zip([0.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-13, "{vals:?}");
        }

        let ap3 = Graph::path(3).unwrap().hamiltonian(HamiltonianKind::Adjacency);
        let vals = sym_eigenvalues(&ap3).unwrap();
        let r2 = 2f64.sqrt();
        for (got, want) in vals.iter().zip([-r2, 0.0, r2]) {
            assert!((got - want).abs() < 1e-13, "{vals:?}");
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = RealMatrix::from_row_major(vec![0.0, 1.0, 1.0 + 1e-9, 0.0]).unwrap();
        assert!(matches!(sym_eigendecomposition(&m), Err(Error::Symmetry(_))));
        let ok = RealMatrix::from_row_major(vec![0.0, 1.0, 1.0 + 1e-13, 0.0]).unwrap();
        assert!(sym_eigendecomposition(&ok).is_ok());
    }

    #[test]
    fn zero_and_empty_matrices() {
        let e = sym_eigendecomposition(&RealMatrix::zeros(3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        assert_eq!(e.vectors, RealMatrix::identity(3));
        assert!(sym_eigendecomposition(&RealMatrix::zeros(0)).unwrap().values.is_empty());
    }

    #[test]
    fn petersen_rooted_product_residuals() {
        let g = Graph::petersen().rooted_product_k2().unwrap();
        let m = g.hamiltonian(HamiltonianKind::Adjacency);
        let e = sym_eigendecomposition(&m).unwrap();
        let (res, orth) = residuals(&m, &e);
        assert!(res < 1e-12 && orth < 1e-12, "{res} {orth}");
    }

    fn arb_symmetric(max_n: usize) -> impl Strategy<Value = RealMatrix> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(-10.0f64..10.0, n * n).prop_map(move |raw| {
                RealMatrix::from_fn(n, |i, j| {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    raw[a * n + b]
                })
            })
        })
    }

    proptest! {
        #[test]
        fn eigenpairs_meet_the_contract(m in arb_symmetric(12)) {
            let e = sym_eigendecomposition(&m).unwrap();
            let (res, orth) = residuals(&m, &e);
            let norm = m.frobenius_norm().max(1.0);
            prop_assert!(res <= 1e-10 * norm, "residual {}", res);
            prop_assert!(orth <= 1e-10, "orthogonality {}", orth);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let trace: f64 = e.values.iter().sum();
            prop_assert!((trace - m.trace()).abs() <= 1e-10 * norm);
        }
    }
}
