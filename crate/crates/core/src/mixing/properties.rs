use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{sym_eigenvalues, RealMatrix};

/// Structural facts about a square matrix, each judged at tolerance `eps`.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixProperties {
    pub symmetric: bool,
    pub doubly_stochastic: bool,
    pub psd: bool,
    pub constant_diagonal: bool,
    pub min_eigenvalue: f64,
    pub max_row_sum_dev: f64,
    pub diag_spread: f64,
    pub asymmetry: f64,
    pub min_entry: f64,
    pub eps: f64,
}

fn symmetric_part(m: &RealMatrix) -> RealMatrix {
    (m + &m.transpose()).scale(0.5)
}

/// Smallest eigenvalue and spectral norm of the symmetric part of `m`.
fn extreme_eigenvalues(m: &RealMatrix) -> Result<(f64, f64)> {
    let values = sym_eigenvalues(&symmetric_part(m))?;
    let min = values.first().copied().unwrap_or(0.0);
    let norm = values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    Ok((min, norm))
}

pub fn min_eigenvalue(m: &RealMatrix) -> Result<f64> {
    extreme_eigenvalues(m).map(|(min, _)| min)
}

pub fn matrix_properties(m: &RealMatrix, eps: f64) -> MatrixProperties {
    let asymmetry = m.asymmetry();
    let max_row_sum_dev = m
        .row_sums()
        .into_iter()
        .chain(m.column_sums())
        .fold(0.0f64, |a, s| a.max((s - 1.0).abs()));
    let min_entry = m.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
    let diag = m.diagonal();
    let diag_spread = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - diag.iter().copied().fold(f64::INFINITY, f64::min);
    // the symmetric part is symmetric by construction, so this only fails on NaN input
    let (min_eigenvalue, norm) = extreme_eigenvalues(m).unwrap_or((f64::NAN, f64::NAN));
    MatrixProperties {
        symmetric: asymmetry <= eps,
        doubly_stochastic: max_row_sum_dev <= eps && min_entry >= -eps,
        psd: min_eigenvalue >= -eps * norm.max(1.0),
        constant_diagonal: diag_spread <= eps,
        min_eigenvalue,
        max_row_sum_dev,
        diag_spread,
        asymmetry,
        min_entry,
        eps,
    }
}

/// `m1 ⪰ m2`: the difference is positive semidefinite within `eps`.
pub fn psd_order(m1: &RealMatrix, m2: &RealMatrix, eps: f64) -> Result<bool> {
    if m1.order() != m2.order() {
        return Err(Error::Dimension(m1.order(), m2.order()));
    }
    let diff = m1 - m2;
    let values = sym_eigenvalues(&diff)?;
    let norm = values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    Ok(values.first().is_none_or(|&min| min >= -eps * norm.max(1.0)))
}

/// For a PSD matrix with constant diagonal: every diagonal entry dominates its
/// row, and a row entry equal to the diagonal forces the two rows to coincide.
pub fn constant_diagonal_gram_check(m: &RealMatrix, eps: f64) -> Result<bool> {
    let props = matrix_properties(m, eps);
    if !(props.symmetric && props.psd && props.constant_diagonal) {
        return Err(Error::Precondition(format!(
            "expected a symmetric PSD matrix with constant diagonal \
             (asymmetry {:e}, min eigenvalue {:e}, diagonal spread {:e})",
            props.asymmetry, props.min_eigenvalue, props.diag_spread
        )));
    }
    let n = m.order();
    for u in 0..n {
        for v in 0..n {
            let gap = m[(u, u)] - m[(u, v)];
            if gap < -eps {
                return Ok(false);
            }
            if gap.abs() <= eps && m.row(u).iter().zip(m.row(v)).any(|(a, b)| (a - b).abs() > 10.0 * eps) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, HamiltonianKind};
    use crate::mixing::AverageMixingMatrix;

    fn amm(g: &Graph) -> RealMatrix {
        AverageMixingMatrix::of_graph(g, HamiltonianKind::Adjacency, 1e-8)
            .unwrap()
            .into_matrix()
    }

    #[test]
    fn property_flags() {
        let p4 = matrix_properties(&amm(&Graph::path(4).unwrap()), 1e-8);
        assert!(p4.symmetric && p4.doubly_stochastic && p4.psd && p4.constant_diagonal);

        let k1k2 = Graph::complete(1)
            .unwrap()
            .disjoint_union(&Graph::complete(2).unwrap())
            .unwrap();
        let p = matrix_properties(&amm(&k1k2), 1e-8);
        assert!(!p.constant_diagonal);
        assert!((p.diag_spread - 0.5).abs() < 1e-12);

        let skew = RealMatrix::from_row_major(vec![0.5, 0.6, 0.4, 0.5]).unwrap();
        let p = matrix_properties(&skew, 1e-8);
        assert!(!p.symmetric && !p.doubly_stochastic);

        let negative = RealMatrix::from_row_major(vec![1.5, -0.5, -0.5, 1.5]).unwrap();
        let p = matrix_properties(&negative, 1e-8);
        assert!(p.symmetric && p.psd && !p.doubly_stochastic);

        let indefinite = RealMatrix::from_row_major(vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let p = matrix_properties(&indefinite, 1e-8);
        assert!(p.doubly_stochastic && !p.psd);
    }

    #[test]
    fn psd_order_examples() {
        for n in 1..6 {
            let j = RealMatrix::ones(n).scale(1.0 / n as f64);
            assert!(psd_order(&RealMatrix::identity(n), &j, 1e-9).unwrap());
            if n > 1 {
                assert!(!psd_order(&j, &RealMatrix::identity(n), 1e-9).unwrap());
            }
        }
        assert!(matches!(
            psd_order(&RealMatrix::identity(2), &RealMatrix::identity(3), 1e-9),
            Err(Error::Dimension(2, 3))
        ));
    }

    #[test]
    fn gram_check_examples() {
        assert!(constant_diagonal_gram_check(&amm(&Graph::cycle(4).unwrap()), 1e-8).unwrap());
        for n in 1..6 {
            let j = RealMatrix::ones(n).scale(1.0 / n as f64);
            assert!(constant_diagonal_gram_check(&j, 1e-8).unwrap());
        }
        let petersen = amm(&Graph::petersen());
        assert!(constant_diagonal_gram_check(&petersen, 1e-8).unwrap());
        for u in 0..10 {
            for v in 0..10 {
                if u != v {
                    assert!(petersen[(u, u)] - petersen[(u, v)] > 1e-3);
                }
            }
        }
        let not_constant = amm(&Graph::path(3).unwrap());
        assert!(matches!(
            constant_diagonal_gram_check(&not_constant, 1e-8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gram_check_equal_entries_force_equal_rows() {
        let m = RealMatrix::from_row_major(vec![
            1.0, 1.0, 0.0, //
            1.0, 1.0, 0.0, //
            0.0, 0.0, 1.0,
        ])
        .unwrap();
        assert!(constant_diagonal_gram_check(&m, 1e-8).unwrap());
        // rows 0 and 1 now differ while m[0][1] still equals the diagonal,
        // which is impossible for a PSD matrix
        let mut bent = m.clone();
        bent[(0, 2)] = 0.1;
        bent[(2, 0)] = 0.1;
        assert!(matches!(
            constant_diagonal_gram_check(&bent, 1e-8),
            Err(Error::Precondition(_))
        ));
    }
}
