//! The short form of the graph6 format (at most 62 vertices).
//!
//! A graph6 line is one size byte `n + 63` followed by the upper triangle of
//! the adjacency matrix in column-major order (`(0,1), (0,2), (1,2), (0,3), …`),
//! packed six bits per byte, most significant first, each byte offset by 63.

use super::Graph;
use crate::error::{Error, Result};

/// Largest order representable by the short size header.
pub const MAX_GRAPH6_ORDER: usize = 62;

const HEADER: &str = ">>graph6<<";

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    let (&first, payload) = bytes
        .split_first()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    if first == 126 {
        return Err(Error::Parse(
            "long size header (more than 62 vertices) is not supported".into(),
        ));
    }
    if !(63..=125).contains(&first) {
        return Err(Error::Parse(format!("invalid size byte {first:#04x}")));
    }
    let n = usize::from(first - 63);
    if n == 0 {
        return Err(Error::Parse("graphs must have at least one vertex".into()));
    }

    let bits = n * (n - 1) / 2;
    let expected = bits.div_ceil(6);
    if payload.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} payload bytes for {n} vertices, found {}",
            payload.len()
        )));
    }
    if let Some(pos) = payload.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Error::Parse(format!(
            "invalid payload byte {:#04x} at offset {}",
            payload[pos],
            pos + 1
        )));
    }

    let bit = |k: usize| (payload[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(Error::Parse("nonzero padding bits".into()));
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                g.set_edge(u, v);
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > MAX_GRAPH6_ORDER {
        return Err(Error::UnsupportedSize(format!(
            "graph6 short form holds at most {MAX_GRAPH6_ORDER} vertices, got {n}"
        )));
    }
    let bits = n * (n - 1) / 2;
    let mut payload = vec![0u8; bits.div_ceil(6)];
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if g.has_edge(u, v) {
                payload[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    let mut out = String::with_capacity(payload.len() + 1);
    out.push(char::from(n as u8 + 63));
    out.extend(payload.into_iter().map(|b| char::from(b + 63)));
    Ok(out)
}
