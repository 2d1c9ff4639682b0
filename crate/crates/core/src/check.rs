//! Full validation of one graph: every identity the library knows how to
//! cross-check, each reported with its residual.

use serde::Serialize;

use crate::error::Result;
use crate::graphs::{write_graph6, Graph, HamiltonianKind};
use crate::mixing::{
    amm_complement_laplacian, amm_rooted_k2_closed, average_mixing_matrix, is_walk_regular,
    matrix_properties,
};
use crate::spectral::{spectral_decomposition, validate_decomposition, RealMatrix};

/// Largest order for which the rooted-product oracle is run.
pub const MAX_ROOTED_ORDER: usize = 10;

/// Largest order for which walk-regularity is recomputed from exact walk counts.
pub const MAX_WALK_COUNT_ORDER: usize = 16;

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub tol_cluster: f64,
    pub tol_check: f64,
    /// Perturbs one computed average mixing matrix before it is checked.
    /// Only meant for exercising the failure path.
    pub corrupt: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tol_cluster: crate::DEFAULT_TOL_CLUSTER,
            tol_check: crate::DEFAULT_TOL_CHECK,
            corrupt: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    /// Size of the violation when the check is numeric.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub graph6: String,
    pub n: usize,
    pub checks: Vec<CheckItem>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn residual(&mut self, name: String, residual: f64, eps: f64) {
        self.checks.push(CheckItem {
            name,
            passed: residual <= eps,
            residual: Some(residual),
            detail: None,
        });
    }

    fn flag(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(CheckItem {
            name,
            passed,
            residual: None,
            detail: Some(detail),
        });
    }
}

pub fn run_checks(g: &Graph, config: &CheckConfig) -> Result<CheckReport> {
    let eps = config.tol_check;
    let n = g.order();
    let mut report = CheckReport {
        graph6: write_graph6(g)?,
        n,
        checks: Vec::new(),
    };

    let mut laplacian_amm = None;
    for kind in [HamiltonianKind::Adjacency, HamiltonianKind::Laplacian] {
        let tag = kind.tag();
        let b = g.hamiltonian(kind);
        let d = spectral_decomposition(g, kind, config.tol_cluster)?;
        let v = validate_decomposition(&d, &b, eps)?;
        let worst = [v.idempotency, v.symmetry, v.orthogonality, v.resolution, v.reconstruction]
            .into_iter()
            .fold(0.0, f64::max);
        report.residual(format!("decomposition_{tag}"), worst, eps);
        report.flag(
            format!("multiplicities_{tag}"),
            v.rank_mismatches.is_empty(),
            format!("{} eigenvalues, {} rank mismatches", d.len(), v.rank_mismatches.len()),
        );

        let mut m = average_mixing_matrix(&d).into_matrix();
        if config.corrupt && kind == HamiltonianKind::Adjacency {
            let j = usize::from(n > 1);
            m[(0, j)] += 0.25;
        }
        let p = matrix_properties(&m, eps);
        report.residual(format!("symmetric_{tag}"), p.asymmetry, eps);
        report.residual(
            format!("doubly_stochastic_{tag}"),
            p.max_row_sum_dev.max(-p.min_entry),
            eps,
        );
        report.residual(format!("psd_{tag}"), (-p.min_eigenvalue).max(0.0), eps);

        if kind == HamiltonianKind::Adjacency {
            let spectral = is_walk_regular(&d, eps)?;
            if n <= MAX_WALK_COUNT_ORDER {
                let counted = g.is_walk_regular_by_counts()?;
                report.flag(
                    "walk_regular_cross_check".into(),
                    spectral == counted,
                    format!("idempotents say {spectral}, walk counts say {counted}"),
                );
            }
            if n <= MAX_ROOTED_ORDER {
                let closed = amm_rooted_k2_closed(&d)?;
                let direct = average_mixing_matrix(&spectral_decomposition(
                    &g.rooted_product_k2()?,
                    HamiltonianKind::Adjacency,
                    config.tol_cluster,
                )?)
                .into_matrix();
                report.residual("rooted_product_k2".into(), closed.max_abs_diff(&direct), eps);
            }
        } else {
            laplacian_amm = Some(m);
        }
    }

    if g.is_connected() {
        let complement = g.complement();
        let predicted = amm_complement_laplacian(g, config.tol_cluster)?;
        let direct = average_mixing_matrix(&spectral_decomposition(
            &complement,
            HamiltonianKind::Laplacian,
            config.tol_cluster,
        )?)
        .into_matrix();
        report.residual("complement_identity".into(), predicted.max_abs_diff(&direct), eps);
        if complement.is_connected() {
            let own: &RealMatrix = laplacian_amm.as_ref().expect("laplacian computed above");
            report.residual("complement_equal_when_connected".into(), own.max_abs_diff(&direct), eps);
        }
    }

    Ok(report)
}
