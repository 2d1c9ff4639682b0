//! Exhaustive enumeration of small graphs up to isomorphism.
//!
//! A labelled graph on `n` vertices is identified with its upper-triangle bit
//! string in graph6 order, read as an integer with the first pair `(0,1)` as
//! the most significant bit, so integer order is lexicographic order. The
//! canonical representative of an isomorphism class is the labelling with the
//! smallest code. Enumeration walks all codes in increasing order and keeps
//! those no vertex permutation can decrease.

use std::sync::OnceLock;

use super::Graph;
use crate::error::{Error, Result};

/// Largest order served by [`enumerate_graphs`].
pub const MAX_ENUMERATION_ORDER: usize = 6;

/// Largest order accepted by [`canonical_code`] (brute force over `n!` labellings).
const MAX_CANONICAL_ORDER: usize = 8;

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Bit position (from the most significant end) of the pair `{u, v}`.
fn pair_position(u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    v * (v - 1) / 2 + u
}

#[cfg(test)]
fn code_of(g: &Graph) -> u64 {
    let m = pair_count(g.order());
    g.edges()
        .fold(0u64, |code, (u, v)| code | 1 << (m - 1 - pair_position(u, v)))
}

fn graph_of(n: usize, code: u64) -> Graph {
    let m = pair_count(n);
    let mut g = Graph::empty(n).expect("enumeration orders are valid");
    for v in 1..n {
        for u in 0..v {
            if code >> (m - 1 - pair_position(u, v)) & 1 == 1 {
                g.set_edge(u, v);
            }
        }
    }
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut perm, &mut out);
    out
}

/// All permutations of `0..n`, computed once per order.
fn cached_permutations(n: usize) -> &'static [Vec<usize>] {
    static CACHE: [OnceLock<Vec<Vec<usize>>>; MAX_CANONICAL_ORDER + 1] =
        [const { OnceLock::new() }; MAX_CANONICAL_ORDER + 1];
    CACHE[n].get_or_init(|| permutations(n))
}

fn heap_permute(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(perm.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, perm, out);
        if k.is_multiple_of(2) {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, perm, out);
}

/// Per-permutation lookup tables that relabel a code one byte at a time.
struct Relabeller {
    chunks: usize,
    tables: Vec<[u64; 256]>,
}

impl Relabeller {
    fn new(n: usize) -> Self {
        let m = pair_count(n);
        let chunks = m.div_ceil(8).max(1);
        let mut tables = Vec::new();
        for perm in cached_permutations(n) {
            // image[b] = bit position that bit b (counted from the least significant end) moves to
            let mut image = vec![0usize; m];
            for v in 1..n {
                for u in 0..v {
                    let from = m - 1 - pair_position(u, v);
                    let to = m - 1 - pair_position(perm[u], perm[v]);
                    image[from] = to;
                }
            }
            for chunk in 0..chunks {
                let mut table = [0u64; 256];
                for (byte, slot) in table.iter_mut().enumerate() {
                    for bit in 0..8 {
                        let b = chunk * 8 + bit;
                        if b < m && byte >> bit & 1 == 1 {
                            *slot |= 1 << image[b];
                        }
                    }
                }
                tables.push(table);
            }
        }
        Relabeller { chunks, tables }
    }

    fn images(&self, code: u64) -> impl Iterator<Item = u64> + '_ {
        self.tables.chunks(self.chunks).map(move |per_perm| {
            per_perm
                .iter()
                .enumerate()
                .fold(0u64, |acc, (c, t)| acc | t[(code >> (8 * c) & 0xff) as usize])
        })
    }
}

/// Smallest code over all relabellings of `g`; equal codes mean isomorphic graphs.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    let n = g.order();
    if n > MAX_CANONICAL_ORDER {
        return Err(Error::UnsupportedSize(format!(
            "brute-force canonical form supports at most {MAX_CANONICAL_ORDER} vertices, got {n}"
        )));
    }
    let m = pair_count(n.max(1));
    let mut best = u64::MAX;
    'perms: for p in cached_permutations(n) {
        // bits are produced most significant first, so a labelling can be
        // dropped as soon as its prefix exceeds the best one found so far
        let mut code = 0u64;
        let mut bit = m;
        for v in 1..n {
            for u in 0..v {
                bit -= 1;
                if g.has_edge(p[u], p[v]) {
                    code |= 1 << bit;
                }
            }
            if code > best >> bit << bit {
                continue 'perms;
            }
        }
        best = best.min(code);
    }
    Ok(best)
}

/// Iterator over one canonical representative per isomorphism class.
pub struct GraphEnumeration {
    n: usize,
    next: u64,
    end: u64,
    relabeller: Relabeller,
}

impl Iterator for GraphEnumeration {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        while self.next < self.end {
            let code = self.next;
            self.next += 1;
            if self.relabeller.images(code).all(|image| image >= code) {
                return Some(graph_of(self.n, code));
            }
        }
        None
    }
}

/// All graphs on `n` vertices up to isomorphism, disconnected ones included,
/// in increasing order of canonical code.
pub fn enumerate_graphs(n: usize) -> Result<GraphEnumeration> {
    if !(1..=MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(Error::UnsupportedSize(format!(
            "built-in enumeration covers 1..={MAX_ENUMERATION_ORDER} vertices, got {n}; \
             supply a graph6 corpus (for example from nauty's geng) for larger orders"
        )));
    }
    Ok(GraphEnumeration {
        n,
        next: 0,
        end: 1u64 << pair_count(n),
        relabeller: Relabeller::new(n),
    })
}
