use std::fs;
use std::path::PathBuf;

use avgmix::graphs::{coarsest_equitable_partition, enumerate_graphs, parse_graph6};
use avgmix::spectral::{
    idempotents_refine, refines, spectral_decomposition, sym_eigenvalues, validate_decomposition,
};
use avgmix::{Graph, HamiltonianKind, RealMatrix, VertexPartition};
use proptest::prelude::*;

const A: HamiltonianKind = HamiltonianKind::Adjacency;
const L: HamiltonianKind = HamiltonianKind::Laplacian;

fn corpus(n: usize) -> Vec<Graph> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../corpora/n{n}.g6"));
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| parse_graph6(l).unwrap())
        .collect()
}

#[test]
fn every_decomposition_up_to_eight_vertices_validates() {
    let mut graphs: Vec<Graph> = Graph::empty(1).into_iter().collect();
    for n in 2..=8 {
        graphs.extend(corpus(n));
    }
    assert_eq!(graphs.len(), 1 + 2 + 4 + 11 + 34 + 156 + 1044 + 12346);
    for g in &graphs {
        for kind in [A, L] {
            let d = spectral_decomposition(g, kind, 1e-8).unwrap();
            let report = validate_decomposition(&d, &g.hamiltonian(kind), 1e-8).unwrap();
            assert!(report.passed, "{g:?} {kind}: {report:?}");
        }
    }
}

#[test]
fn cartesian_idempotents_are_sums_of_tensor_products() {
    let factors = [
        Graph::complete(2).unwrap(),
        Graph::path(3).unwrap(),
        Graph::cycle(4).unwrap(),
        Graph::cycle(5).unwrap(),
    ];
    for x in &factors {
        for y in &factors {
            let dx = spectral_decomposition(x, A, 1e-8).unwrap();
            let dy = spectral_decomposition(y, A, 1e-8).unwrap();
            let tensor: Vec<RealMatrix> = dx
                .idempotents()
                .iter()
                .flat_map(|e| dy.idempotents().iter().map(move |f| e.kron(f)))
                .collect();
            let product = spectral_decomposition(&x.cartesian_product(y).unwrap(), A, 1e-8).unwrap();
            assert!(idempotents_refine(&tensor, product.idempotents(), 1e-8).unwrap());
            // the converse fails as soon as two eigenvalue sums coincide
            let coincide = product.len() < tensor.len();
            assert_eq!(
                idempotents_refine(product.idempotents(), &tensor, 1e-8).unwrap(),
                !coincide
            );
        }
    }
}

fn refines_clique_union(g: &Graph, p: &VertexPartition) -> bool {
    let d = spectral_decomposition(g, A, 1e-8).unwrap();
    let y = spectral_decomposition(&p.clique_union().unwrap(), A, 1e-8).unwrap();
    refines(&d, &y, 1e-8).unwrap()
}

/// Orthogonal projection onto the span of the cell indicator vectors.
fn cell_projection(p: &VertexPartition) -> RealMatrix {
    let n = p.order();
    let mut m = RealMatrix::zeros(n);
    for cell in p.cells() {
        for &u in cell {
            for &v in cell {
                m[(u, v)] = 1.0 / cell.len() as f64;
            }
        }
    }
    m
}

#[test]
fn equitable_cells_span_an_invariant_subspace() {
    for n in 1..=6 {
        for g in enumerate_graphs(n).unwrap() {
            let a = g.hamiltonian(A);
            let p = cell_projection(&coarsest_equitable_partition(&g));
            assert!((&a * &p).max_abs_diff(&(&p * &a)) < 1e-12, "{g:?}");
        }
    }
}

#[test]
fn refinement_of_the_clique_union_can_fail() {
    // The cells {0, 2} and {1} of P3 are equitable, but the clique union K2 + K1
    // has the eigenspace spanned by the centre alone, which A(P3) does not preserve.
    let p3 = Graph::path(3).unwrap();
    let p = coarsest_equitable_partition(&p3);
    assert_eq!(p.cells(), [vec![0, 2], vec![1]]);
    assert!(!refines_clique_union(&p3, &p));

    // Equal cells do not help when one eigenspace of X straddles both
    // eigenspaces of the clique union: the empty graph against K2.
    let empty = Graph::empty(2).unwrap();
    assert!(!refines_clique_union(&empty, &VertexPartition::unit(2)));

    // K_n itself refines trivially.
    let k4 = Graph::complete(4).unwrap();
    assert!(refines_clique_union(&k4, &coarsest_equitable_partition(&k4)));
}

fn nalgebra_eigenvalues(m: &RealMatrix) -> Vec<f64> {
    let n = m.order();
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    let mut values: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

fn symmetric_matrix() -> impl Strategy<Value = RealMatrix> {
    (1usize..=12).prop_flat_map(|n| {
        proptest::collection::vec(-10.0f64..10.0, n * n).prop_map(move |raw| {
            RealMatrix::from_fn(n, |i, j| raw[i.min(j) * n + i.max(j)])
        })
    })
}

proptest! {
    #[test]
    fn eigenvalues_agree_with_nalgebra(m in symmetric_matrix()) {
        let ours = sym_eigenvalues(&m).unwrap();
        let theirs = nalgebra_eigenvalues(&m);
        let scale = m.frobenius_norm().max(1.0);
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-10 * scale, "{ours:?} vs {theirs:?}");
        }
    }
}

#[test]
fn graph_spectra_agree_with_nalgebra() {
    for g in corpus(7) {
        for kind in [A, L] {
            let b = g.hamiltonian(kind);
            let ours = sym_eigenvalues(&b).unwrap();
            let theirs = nalgebra_eigenvalues(&b);
            assert!(ours.iter().zip(&theirs).all(|(a, b)| (a - b).abs() < 1e-10));
        }
    }
}
