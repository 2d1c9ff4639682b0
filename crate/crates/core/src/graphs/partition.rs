use std::collections::BTreeMap;

use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

/// An ordered list of nonempty, disjoint vertex cells covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    cells: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::Partition("empty cell".into()));
            }
            for &v in cell {
                if v >= n {
                    return Err(Error::Partition(format!("vertex {v} out of range for {n} vertices")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Partition(format!("vertex {v} appears twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!("vertex {v} is not covered")));
        }
        Ok(VertexPartition { cells })
    }

    /// Every vertex in its own cell.
    pub fn discrete(n: usize) -> Self {
        VertexPartition {
            cells: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// All vertices in one cell.
    pub fn unit(n: usize) -> Self {
        VertexPartition {
            cells: vec![(0..n).collect()],
        }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn order(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// `cell_index[v]` for every vertex.
    pub fn cell_index(&self) -> Vec<usize> {
        let mut index = vec![0; self.order()];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                index[v] = i;
            }
        }
        index
    }

    /// Disjoint union of complete graphs, one on each cell, on the same vertex set.
    pub fn clique_union(&self) -> Result<Graph> {
        let mut g = Graph::empty(self.order())?;
        for cell in &self.cells {
            for (i, &u) in cell.iter().enumerate() {
                for &v in &cell[i + 1..] {
                    g.set_edge(u, v);
                }
            }
        }
        Ok(g)
    }
}

fn neighbor_counts(g: &Graph, v: usize, cell_masks: &[u64]) -> Vec<u32> {
    let row = g.neighbor_mask(v);
    cell_masks.iter().map(|m| (row & m).count_ones()).collect()
}

fn cell_masks(p: &VertexPartition) -> Vec<u64> {
    p.cells
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect()
}

/// True iff every vertex of a cell has the same number of neighbours in each cell.
pub fn is_equitable(g: &Graph, p: &VertexPartition) -> Result<bool> {
    if p.order() != g.order() {
        return Err(Error::Partition(format!(
            "partition covers {} vertices, graph has {}",
            p.order(),
            g.order()
        )));
    }
    let masks = cell_masks(p);
    Ok(p.cells.iter().all(|cell| {
        let first = neighbor_counts(g, cell[0], &masks);
        cell[1..].iter().all(|&v| neighbor_counts(g, v, &masks) == first)
    }))
}

/// Coarsest equitable partition, by colour refinement from the unit partition.
///
/// Cells are listed in order of their smallest vertex.
pub fn coarsest_equitable_partition(g: &Graph) -> VertexPartition {
    let n = g.order();
    let mut colour = vec![0usize; n];
    let mut classes = 1;
    loop {
        let mut masks = vec![0u64; classes];
        for (v, &c) in colour.iter().enumerate() {
            masks[c] |= 1 << v;
        }
        let mut ids: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
        let signatures: Vec<_> = (0..n)
            .map(|v| (colour[v], neighbor_counts(g, v, &masks)))
            .collect();
        for s in &signatures {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        let refined: Vec<usize> = signatures.iter().map(|s| ids[s]).collect();
        if ids.len() == classes {
            break;
        }
        classes = ids.len();
        colour = refined;
    }

    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut slot: BTreeMap<usize, usize> = BTreeMap::new();
    for (v, &c) in colour.iter().enumerate() {
        let i = *slot.entry(c).or_insert_with(|| {
            cells.push(Vec::new());
            cells.len() - 1
        });
        cells[i].push(v);
    }
    VertexPartition { cells }
}
