//! Closed-form average mixing matrices and bounds.

use super::{average_mixing_matrix, AverageMixingMatrix};
use crate::error::{Error, Result};
use crate::graphs::{Graph, HamiltonianKind, VertexPartition};
use crate::spectral::{spectral_decomposition, RealMatrix, SpectralDecomposition};

/// `M̂(K_n) = (1 − 2/n) I + (2/n²) J`.
///
/// `K_n` is regular, so its adjacency matrix and Laplacian share idempotents
/// and the result is the same for both kinds.
pub fn kn_amm(n: usize, _kind: HamiltonianKind) -> Result<RealMatrix> {
    if n == 0 {
        return Err(Error::Domain("K_n needs at least one vertex".into()));
    }
    let nf = n as f64;
    Ok(RealMatrix::from_fn(n, |i, j| {
        2.0 / (nf * nf) + if i == j { 1.0 - 2.0 / nf } else { 0.0 }
    }))
}

/// `tr M̂(K_n) = (n² − 2n + 2)/n`.
pub fn kn_trace(n: usize, _kind: HamiltonianKind) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("K_n needs at least one vertex".into()));
    }
    let nf = n as f64;
    Ok((nf * nf - 2.0 * nf + 2.0) / nf)
}

fn require_connected(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Precondition(
            "the complement identity requires a connected graph".into(),
        ));
    }
    Ok(())
}

/// Laplacian average mixing matrix of the complement of a connected graph,
/// computed from `M̂_L(g)` and the components of the complement.
///
/// With `L(g) + L(ḡ) = nI − J`, every idempotent of `L(g)` except `E_0 = J/n`
/// and `E_n` (eigenvalue `n`) stays an idempotent of `L(ḡ)`; those two merge
/// into the kernel projection `P = blockdiag(J/|C_i|)` of `L(ḡ)`, so
///
/// ```text
/// M̂_L(ḡ) = M̂_L(g) − (1/n²) J − E_n ∘ E_n + blockdiag(J/|C_i|²),   E_n = P − J/n.
/// ```
///
/// `E_n` vanishes when the complement is connected, leaving `M̂_L(g)`.
pub fn amm_complement_laplacian(g: &Graph, tol_cluster: f64) -> Result<RealMatrix> {
    require_connected(g)?;
    let n = g.order();
    let nf = n as f64;
    let base = average_mixing_matrix(&spectral_decomposition(g, HamiltonianKind::Laplacian, tol_cluster)?);

    let mut component = vec![0usize; n];
    let mut size = Vec::new();
    for (i, c) in g.complement().connected_components().iter().enumerate() {
        for &v in c {
            component[v] = i;
        }
        size.push(c.len() as f64);
    }
    let same = |u: usize, v: usize| component[u] == component[v];
    Ok(RealMatrix::from_fn(n, |u, v| {
        let kernel = if same(u, v) { 1.0 / size[component[u]] } else { 0.0 };
        let top = kernel - 1.0 / nf;
        base.matrix()[(u, v)] - 1.0 / (nf * nf) - top * top + kernel * kernel
    }))
}

/// `tr M̂_L(ḡ)` for connected `g`: `tr M̂_L(g) + 2(c − 1)/n`, where `c`
/// counts components of the complement.
///
/// This is the trace of [`amm_complement_laplacian`]: the `J/n²` and
/// block terms contribute `Σ 1/|C_i| − 1/n`, and `tr(E_n ∘ E_n)` equals
/// `Σ 1/|C_i| − (2c − 1)/n`.
pub fn trace_complement_laplacian(g: &Graph, tol_cluster: f64) -> Result<f64> {
    require_connected(g)?;
    let n = g.order() as f64;
    let c = g.complement().connected_components().len() as f64;
    let base = AverageMixingMatrix::of_graph(g, HamiltonianKind::Laplacian, tol_cluster)?;
    Ok(base.trace() + 2.0 * (c - 1.0) / n)
}

fn require_adjacency(d: &SpectralDecomposition) -> Result<()> {
    match d.kind() {
        HamiltonianKind::Adjacency => Ok(()),
        other => Err(Error::Kind(other)),
    }
}

/// Spectral decomposition of `A(X(K₂))` built from that of `A(X)`.
///
/// Each eigenvalue `λ` of `X` with projection `F` yields the two roots `μ`
/// of `t² − λt − 1`, with projection `1/(μ² + 1) [[μ²F, μF], [μF, F]]` in
/// the vertex order of [`Graph::rooted_product_k2`]. Distinct `λ` give
/// distinct roots because each root is monotone in `λ` and the two roots
/// have opposite signs.
pub fn rooted_k2_idempotents(d: &SpectralDecomposition) -> Result<SpectralDecomposition> {
    require_adjacency(d)?;
    let n = d.order();
    let mut parts: Vec<(f64, RealMatrix, usize)> = Vec::with_capacity(2 * d.len());
    for ((lambda, f), &mult) in d.iter().zip(d.multiplicities()) {
        let root = (lambda * lambda + 4.0).sqrt();
        for mu in [(lambda - root) / 2.0, (lambda + root) / 2.0] {
            let w = 1.0 / (mu * mu + 1.0);
            let e = RealMatrix::from_fn(2 * n, |r, c| {
                let block = match (r < n, c < n) {
                    (true, true) => mu * mu,
                    (false, false) => 1.0,
                    _ => mu,
                };
                w * block * f[(r % n, c % n)]
            });
            parts.push((mu, e, mult));
        }
    }
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut thetas, mut idempotents, mut mults) = (Vec::new(), Vec::new(), Vec::new());
    for (mu, e, m) in parts {
        thetas.push(mu);
        idempotents.push(e);
        mults.push(m);
    }
    SpectralDecomposition::from_parts(HamiltonianKind::Adjacency, thetas, idempotents, mults)
}

/// `M̂(X(K₂)) = [[M̂(X) − N, N], [N, M̂(X) − N]]` with
/// `N = Σ_i 2/(λ_i² + 4) · F_i ∘ F_i`.
pub fn amm_rooted_k2_closed(d: &SpectralDecomposition) -> Result<RealMatrix> {
    require_adjacency(d)?;
    let n = d.order();
    let base = average_mixing_matrix(d).into_matrix();
    let mut coupling = RealMatrix::zeros(n);
    for (lambda, f) in d.iter() {
        coupling = &coupling + &f.schur(f).scale(2.0 / (lambda * lambda + 4.0));
    }
    Ok(RealMatrix::from_fn(2 * n, |r, c| {
        let (i, j) = (r % n, c % n);
        if (r < n) == (c < n) {
            base[(i, j)] - coupling[(i, j)]
        } else {
            coupling[(i, j)]
        }
    }))
}

/// Walk-regular iff every adjacency idempotent has constant diagonal.
pub fn is_walk_regular(d: &SpectralDecomposition, eps: f64) -> Result<bool> {
    require_adjacency(d)?;
    Ok(d.idempotents().iter().all(|e| {
        let diag = e.diagonal();
        let (lo, hi) = diag
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        hi - lo <= eps
    }))
}

/// `Σ_j (a_j² − 2a_j + 2)/a_j = n − 2m + 2 Σ_j 1/a_j` over the cell sizes `a_j`.
pub fn equitable_trace_bound(p: &VertexPartition) -> f64 {
    let n = p.order() as f64;
    let m = p.len() as f64;
    n - 2.0 * m + 2.0 * p.sizes().iter().map(|&a| 1.0 / a as f64).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::coarsest_equitable_partition;
    use crate::spectral::validate_decomposition;

    const TOL: f64 = 1e-8;
    const A: HamiltonianKind = HamiltonianKind::Adjacency;
    const L: HamiltonianKind = HamiltonianKind::Laplacian;

    fn direct(g: &Graph, kind: HamiltonianKind) -> RealMatrix {
        AverageMixingMatrix::of_graph(g, kind, TOL).unwrap().into_matrix()
    }

    #[test]
    fn complete_graph_traces() {
        assert!((kn_trace(3, A).unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert!((kn_trace(7, L).unwrap() - 37.0 / 7.0).abs() < 1e-15);
        assert_eq!(kn_trace(2, A).unwrap(), 1.0);
        assert_eq!(kn_amm(2, L).unwrap(), RealMatrix::ones(2).scale(0.5));
        assert_eq!(kn_amm(1, A).unwrap(), RealMatrix::identity(1));
        assert!(kn_amm(0, A).is_err());
        for n in 1..9 {
            let g = Graph::complete(n).unwrap();
            assert!(kn_amm(n, A).unwrap().max_abs_diff(&direct(&g, A)) < 1e-12);
            assert!((kn_trace(n, L).unwrap() - direct(&g, L).trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_of_self_complementary_and_connected_complements() {
        for g in [Graph::path(4).unwrap(), Graph::cycle(5).unwrap(), Graph::petersen()] {
            assert!(g.complement().is_connected());
            let via = amm_complement_laplacian(&g, TOL).unwrap();
            assert!(via.max_abs_diff(&direct(&g, L)) < 1e-12);
            assert!(via.max_abs_diff(&direct(&g.complement(), L)) < 1e-10);
            let t = trace_complement_laplacian(&g, TOL).unwrap();
            assert!((t - direct(&g, L).trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_of_complete_graph_is_identity() {
        for n in 2..8 {
            let g = Graph::complete(n).unwrap();
            let m = amm_complement_laplacian(&g, TOL).unwrap();
            assert!(m.max_abs_diff(&RealMatrix::identity(n)) < 1e-12);
            assert!((trace_complement_laplacian(&g, TOL).unwrap() - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_trace_without_the_top_eigenvalue_term_fails_for_k3() {
        // dropping E_n ∘ E_n: tr M̂_L(K3) − 1/3 + Σ 1/|C_i| = 5/3 − 1/3 + 3 = 13/3,
        // while the complement is edgeless with M̂_L = I and trace 3
        let k3 = Graph::complete(3).unwrap();
        let naive = direct(&k3, L).trace() - 1.0 / 3.0 + 3.0;
        assert!((naive - 13.0 / 3.0).abs() < 1e-12);
        assert!((direct(&k3.complement(), L).trace() - 3.0).abs() < 1e-12);
        assert!((trace_complement_laplacian(&k3, TOL).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn complement_requires_connected_graph() {
        let g = Graph::empty(3).unwrap();
        assert!(matches!(amm_complement_laplacian(&g, TOL), Err(Error::Precondition(_))));
        assert!(matches!(trace_complement_laplacian(&g, TOL), Err(Error::Precondition(_))));
    }

    #[test]
    fn rooted_idempotents_of_small_graphs() {
        let k1 = spectral_decomposition(&Graph::complete(1).unwrap(), A, TOL).unwrap();
        let r = rooted_k2_idempotents(&k1).unwrap();
        assert_eq!(r.eigenvalues().len(), 2);
        assert!((r.eigenvalues()[0] + 1.0).abs() < 1e-15 && (r.eigenvalues()[1] - 1.0).abs() < 1e-15);

        let k2 = spectral_decomposition(&Graph::complete(2).unwrap(), A, TOL).unwrap();
        let r = rooted_k2_idempotents(&k2).unwrap();
        let s5 = 5f64.sqrt();
        let expected = [(-1.0 - s5) / 2.0, (1.0 - s5) / 2.0, (-1.0 + s5) / 2.0, (1.0 + s5) / 2.0];
        for (got, want) in r.eigenvalues().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
        let p4 = Graph::complete(2).unwrap().rooted_product_k2().unwrap();
        assert!(validate_decomposition(&r, &p4.hamiltonian(A), 1e-8).unwrap().passed);
    }

    #[test]
    fn rooted_idempotents_of_petersen() {
        let d = spectral_decomposition(&Graph::petersen(), A, TOL).unwrap();
        let r = rooted_k2_idempotents(&d).unwrap();
        assert_eq!(r.multiplicities(), &[4, 5, 1, 4, 5, 1]);
        let big = Graph::petersen().rooted_product_k2().unwrap();
        assert!(validate_decomposition(&r, &big.hamiltonian(A), 1e-8).unwrap().passed);
        let direct_d = spectral_decomposition(&big, A, TOL).unwrap();
        assert_eq!(direct_d.multiplicities(), r.multiplicities());
        for (a, b) in direct_d.idempotents().iter().zip(r.idempotents()) {
            assert!(a.max_abs_diff(b) < 1e-10);
        }
    }

    #[test]
    fn rooted_closed_form_matches_direct() {
        let k2 = spectral_decomposition(&Graph::complete(2).unwrap(), A, TOL).unwrap();
        let m = amm_rooted_k2_closed(&k2).unwrap();
        assert!(m.diagonal().iter().all(|x| (x - 0.3).abs() < 1e-12));
        assert!((m.trace() - 1.2).abs() < 1e-12);
        let p4 = direct(&Graph::path(4).unwrap(), A);
        // the rooted product is the path 2-0-1-3; order[u] is u's position on it
        let order = [1, 2, 0, 3];
        for u in 0..4 {
            for v in 0..4 {
                assert!((m[(u, v)] - p4[(order[u], order[v])]).abs() < 1e-12);
            }
        }

        let k1 = spectral_decomposition(&Graph::complete(1).unwrap(), A, TOL).unwrap();
        assert!(amm_rooted_k2_closed(&k1).unwrap().max_abs_diff(&RealMatrix::ones(2).scale(0.5)) < 1e-15);

        let lap = spectral_decomposition(&Graph::complete(2).unwrap(), L, TOL).unwrap();
        assert!(matches!(amm_rooted_k2_closed(&lap), Err(Error::Kind(HamiltonianKind::Laplacian))));
        assert!(matches!(rooted_k2_idempotents(&lap), Err(Error::Kind(_))));
        assert!(matches!(is_walk_regular(&lap, TOL), Err(Error::Kind(_))));
    }

    #[test]
    fn walk_regularity() {
        let pete = spectral_decomposition(&Graph::petersen(), A, TOL).unwrap();
        assert!(is_walk_regular(&pete, TOL).unwrap());
        let p4 = spectral_decomposition(&Graph::path(4).unwrap(), A, TOL).unwrap();
        assert!(!is_walk_regular(&p4, TOL).unwrap());
        let rooted = Graph::petersen().rooted_product_k2().unwrap();
        let d = spectral_decomposition(&rooted, A, TOL).unwrap();
        assert!(!is_walk_regular(&d, TOL).unwrap());
        let m = average_mixing_matrix(&d).into_matrix();
        let spread = m.diagonal().iter().fold(0.0f64, |a, x| a.max((x - m[(0, 0)]).abs()));
        assert!(spread < 1e-10);
    }

    #[test]
    fn equitable_bounds() {
        for n in 1..8 {
            let single = equitable_trace_bound(&VertexPartition::unit(n));
            assert!((single - kn_trace(n, A).unwrap()).abs() < 1e-12);
            assert!((equitable_trace_bound(&VertexPartition::discrete(n)) - n as f64).abs() < 1e-12);
        }
        let star = Graph::star(3).unwrap();
        let bound = equitable_trace_bound(&coarsest_equitable_partition(&star));
        assert!((bound - 8.0 / 3.0).abs() < 1e-12);
        assert!(direct(&star, A).trace() <= bound + 1e-9);
    }
}
