//! Simple undirected graphs and the constructions used throughout the crate.
//!
//! Graphs are stored as one 64-bit adjacency row per vertex, which caps the
//! order at [`MAX_ORDER`] vertices. Every operation here is a pure function of
//! its inputs.

mod enumerate;
mod graph6;
mod partition;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::RealMatrix;

pub use enumerate::{canonical_code, enumerate_graphs, MAX_ENUMERATION_ORDER};
pub use graph6::{parse_graph6, write_graph6, MAX_GRAPH6_ORDER};
pub use partition::{coarsest_equitable_partition, is_equitable, VertexPartition};

/// Largest vertex count representable by [`Graph`].
pub const MAX_ORDER: usize = 64;

/// Which matrix of the graph drives the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianKind {
    Adjacency,
    Laplacian,
}

impl HamiltonianKind {
    /// Short tag used in column names (`A` or `L`).
    pub fn tag(self) -> &'static str {
        match self {
            HamiltonianKind::Adjacency => "A",
            HamiltonianKind::Laplacian => "L",
        }
    }
}

impl fmt::Display for HamiltonianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HamiltonianKind::Adjacency => f.write_str("adjacency"),
            HamiltonianKind::Laplacian => f.write_str("laplacian"),
        }
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::UnsupportedSize(format!(
            "graph order must be in 1..={MAX_ORDER}, got {n}"
        )));
    }
    Ok(())
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Graph {
            n,
            rows: vec![0; n],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Domain(format!("loop at vertex {u}")));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The cycle `C_n`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=k).map(|v| (0, v)).collect();
        Graph::from_edges(k + 1, &edges)
    }

    /// The Petersen graph: outer 5-cycle on 0..5, inner pentagram on 5..10.
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).expect("petersen edges are valid")
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    /// Adjacency row of `u` as a bit mask.
    pub fn neighbor_mask(&self, u: usize) -> u64 {
        self.rows[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let mut mask = self.rows[u];
        std::iter::from_fn(move || {
            if mask == 0 {
                return None;
            }
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        })
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degree(0);
        (1..self.n).all(|u| self.degree(u) == d)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// The adjacency matrix or the Laplacian `Δ − A`.
    pub fn hamiltonian(&self, kind: HamiltonianKind) -> RealMatrix {
        let n = self.n;
        let mut m = RealMatrix::zeros(n);
        for (u, v) in self.edges() {
            let w = match kind {
                HamiltonianKind::Adjacency => 1.0,
                HamiltonianKind::Laplacian => -1.0,
            };
            m[(u, v)] = w;
            m[(v, u)] = w;
        }
        if kind == HamiltonianKind::Laplacian {
            for u in 0..n {
                m[(u, u)] = self.degree(u) as f64;
            }
        }
        m
    }

    pub fn complement(&self) -> Graph {
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(u, r)| !r & full & !(1 << u))
            .collect();
        Graph { n: self.n, rows }
    }

    /// `self + other`, with the vertices of `other` shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut g = Graph::empty(self.n + other.n)?;
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.set_edge(self.n + u, self.n + v);
        }
        Ok(g)
    }

    /// Cartesian product; vertex `(u, x)` is numbered `u * other.order() + x`.
    pub fn cartesian_product(&self, other: &Graph) -> Result<Graph> {
        let m = other.n;
        let mut g = Graph::empty(self.n * m)?;
        for u in 0..self.n {
            for (x, y) in other.edges() {
                g.set_edge(u * m + x, u * m + y);
            }
        }
        for (u, v) in self.edges() {
            for x in 0..m {
                g.set_edge(u * m + x, v * m + x);
            }
        }
        Ok(g)
    }

    /// Categorical (direct) product, numbered as in [`Graph::cartesian_product`].
    pub fn categorical_product(&self, other: &Graph) -> Result<Graph> {
        let m = other.n;
        let mut g = Graph::empty(self.n * m)?;
        for (u, v) in self.edges() {
            for (x, y) in other.edges() {
                g.set_edge(u * m + x, v * m + y);
                g.set_edge(u * m + y, v * m + x);
            }
        }
        Ok(g)
    }

    /// Rooted product `X(K₂)`: vertex `n + i` is a pendant attached to `i`.
    pub fn rooted_product_k2(&self) -> Result<Graph> {
        let n = self.n;
        let mut g = Graph::empty(2 * n)?;
        for (u, v) in self.edges() {
            g.set_edge(u, v);
        }
        for i in 0..n {
            g.set_edge(i, n + i);
        }
        Ok(g)
    }

    /// Maximal connected vertex sets, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = 0u64;
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut reached = 1u64 << start;
            let mut frontier = reached;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let u = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.rows[u];
                }
                frontier = next & !reached;
                reached |= next;
            }
            seen |= reached;
            components.push((0..self.n).filter(|&v| reached >> v & 1 == 1).collect());
        }
        components
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Dimension(perm.len(), self.n));
        }
        let mut hit = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut hit[p], true) {
                return Err(Error::Domain("relabelling is not a permutation".into()));
            }
        }
        let mut g = Graph::empty(self.n)?;
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        Ok(g)
    }

    /// Number of closed walks of length `k` at each vertex, for `k` in `0..=max_len`.
    ///
    /// Exact integer arithmetic; overflows are reported rather than wrapped.
    pub fn closed_walk_counts(&self, max_len: usize) -> Result<Vec<Vec<u128>>> {
        let n = self.n;
        // power[u][v] = number of walks of the current length from u to v
        let mut power: Vec<Vec<u128>> = (0..n)
            .map(|u| (0..n).map(|v| u128::from(u == v)).collect())
            .collect();
        let mut diagonals = Vec::with_capacity(max_len + 1);
        for k in 0..=max_len {
            diagonals.push((0..n).map(|u| power[u][u]).collect());
            if k == max_len {
                break;
            }
            let mut next = vec![vec![0u128; n]; n];
            for (u, row) in next.iter_mut().enumerate() {
                for w in self.neighbors(u) {
                    for (v, cell) in row.iter_mut().enumerate() {
                        *cell = cell
                            .checked_add(power[w][v])
                            .ok_or_else(|| Error::Domain("walk count overflow".into()))?;
                    }
                }
            }
            power = next;
        }
        Ok(diagonals)
    }

    /// Walk-regularity decided by exact closed-walk counts of length `0..n`.
    ///
    /// Lengths up to `n − 1` suffice because higher powers of `A` are linear
    /// combinations of lower ones.
    pub fn is_walk_regular_by_counts(&self) -> Result<bool> {
        let counts = self.closed_walk_counts(self.n.saturating_sub(1).max(1))?;
        Ok(counts.iter().all(|diag| diag.iter().all(|&c| c == diag[0])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_edges(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    /// Brute-force isomorphism test over all permutations.
    fn isomorphic(g: &Graph, h: &Graph) -> bool {
        if g.order() != h.order() || g.edge_count() != h.edge_count() {
            return false;
        }
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if g.relabel(&perm).unwrap() == *h {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn hamiltonians_of_small_graphs() {
        let k2 = Graph::complete(2).unwrap();
        let a = k2.hamiltonian(HamiltonianKind::Adjacency);
        assert_eq!(a.as_slice(), &[0.0, 1.0, 1.0, 0.0]);
        let l = k2.hamiltonian(HamiltonianKind::Laplacian);
        assert_eq!(l.as_slice(), &[1.0, -1.0, -1.0, 1.0]);

        let p3 = Graph::path(3).unwrap().hamiltonian(HamiltonianKind::Laplacian);
        assert_eq!((0..3).map(|i| p3[(i, i)]).collect::<Vec<_>>(), vec![1.0, 2.0, 1.0]);
        for i in 0..3 {
            assert_eq!((0..3).map(|j| p3[(i, j)]).sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_orders_and_edges() {
        assert!(matches!(Graph::empty(0), Err(Error::UnsupportedSize(_))));
        assert!(matches!(Graph::empty(65), Err(Error::UnsupportedSize(_))));
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(Graph::complete(64).is_ok());
    }

    #[test]
    fn complements() {
        for n in 1..7 {
            let kn = Graph::complete(n).unwrap();
            assert_eq!(kn.complement(), Graph::empty(n).unwrap());
        }
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(sorted_edges(&c4.complement()), vec![(0, 2), (1, 3)]);
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(c5.complement().edge_count(), 5);
        assert!(isomorphic(&c5, &c5.complement()));
        let full = Graph::complete(64).unwrap();
        assert_eq!(full.complement().edge_count(), 0);
    }

    #[test]
    fn disjoint_unions() {
        let k1 = Graph::complete(1).unwrap();
        assert_eq!(k1.disjoint_union(&k1).unwrap(), Graph::empty(2).unwrap());
        let k2 = Graph::complete(2).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let u = k2.disjoint_union(&k3).unwrap();
        assert_eq!((u.order(), u.edge_count()), (5, 4));
        assert_eq!(u.connected_components(), vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn products() {
        let k1 = Graph::complete(1).unwrap();
        let k2 = Graph::complete(2).unwrap();
        let k3 = Graph::complete(3).unwrap();
        // K2 □ K2 with (u,x) -> 2u + x: 0-1, 2-3, 0-2, 1-3, which is C4 relabelled
        let square = k2.cartesian_product(&k2).unwrap();
        assert_eq!(sorted_edges(&square), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(isomorphic(&square, &Graph::cycle(4).unwrap()));

        let p3 = Graph::path(3).unwrap();
        assert_eq!(k1.cartesian_product(&p3).unwrap(), p3);
        let pk = p3.cartesian_product(&k2).unwrap();
        for u in 0..3 {
            for x in 0..2 {
                assert_eq!(pk.degree(u * 2 + x), p3.degree(u) + k2.degree(x));
            }
        }

        let cat = k2.categorical_product(&k2).unwrap();
        assert_eq!(sorted_edges(&cat), vec![(0, 3), (1, 2)]);
        assert_eq!(p3.categorical_product(&k1).unwrap(), Graph::empty(3).unwrap());
        let k2k3 = k2.categorical_product(&k3).unwrap();
        assert_eq!((k2k3.order(), k2k3.edge_count()), (6, 6));
    }

    #[test]
    fn rooted_products() {
        let k1 = Graph::complete(1).unwrap();
        assert_eq!(k1.rooted_product_k2().unwrap(), Graph::complete(2).unwrap());
        let p4 = Graph::complete(2).unwrap().rooted_product_k2().unwrap();
        assert!(isomorphic(&p4, &Graph::path(4).unwrap()));

        let pete = Graph::petersen().rooted_product_k2().unwrap();
        assert_eq!((pete.order(), pete.edge_count()), (20, 25));
        for i in 0..10 {
            assert_eq!(pete.degree(10 + i), 1);
            assert!(pete.has_edge(i, 10 + i));
        }
    }

    #[test]
    fn components() {
        assert_eq!(Graph::complete(5).unwrap().connected_components().len(), 1);
        assert_eq!(
            Graph::empty(4).unwrap().connected_components(),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
    }

    #[test]
    fn petersen_is_cubic_and_walk_regular() {
        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!(p.degrees().iter().all(|&d| d == 3));
        assert!(p.is_walk_regular_by_counts().unwrap());
        assert!(!Graph::path(4).unwrap().is_walk_regular_by_counts().unwrap());
    }

    #[test]
    fn relabel_rejects_non_permutations() {
        let p = Graph::path(3).unwrap();
        assert!(p.relabel(&[0, 0, 1]).is_err());
        assert!(p.relabel(&[0, 1]).is_err());
        assert_eq!(p.relabel(&[2, 1, 0]).unwrap(), p);
    }
}
