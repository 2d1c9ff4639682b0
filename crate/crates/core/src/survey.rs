//! Corpus scans: per-graph statistics, extremal traces and flag counts.
//!
//! Records are computed independently per graph on a bounded thread pool and
//! collected in input order, so the output does not depend on the worker
//! count.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{enumerate_graphs, parse_graph6, write_graph6, Graph, HamiltonianKind};
use crate::mixing::{average_mixing_matrix, is_walk_regular, kn_amm, kn_trace, psd_order};
use crate::rational;
use crate::spectral::spectral_decomposition;

/// Two traces closer than this are treated as equal.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative eigenvalue clustering tolerance.
    pub cluster: f64,
    /// Absolute tolerance for constant-diagonal and walk-regularity flags.
    pub check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cluster: crate::DEFAULT_TOL_CLUSTER,
            check: crate::DEFAULT_TOL_CHECK,
        }
    }
}

/// Statistics of one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub graph6: String,
    pub n: usize,
    pub connected: bool,
    #[serde(rename = "trace_A")]
    pub trace_a: f64,
    #[serde(rename = "trace_L")]
    pub trace_l: f64,
    #[serde(rename = "constdiag_A")]
    pub constdiag_a: bool,
    #[serde(rename = "constdiag_L")]
    pub constdiag_l: bool,
    pub walk_regular: bool,
}

impl SurveyRecord {
    pub fn trace(&self, kind: HamiltonianKind) -> f64 {
        match kind {
            HamiltonianKind::Adjacency => self.trace_a,
            HamiltonianKind::Laplacian => self.trace_l,
        }
    }
}

fn diagonal_spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    hi - lo
}

pub fn survey_record(g: &Graph, tol: &Tolerances) -> Result<SurveyRecord> {
    let da = spectral_decomposition(g, HamiltonianKind::Adjacency, tol.cluster)?;
    let dl = spectral_decomposition(g, HamiltonianKind::Laplacian, tol.cluster)?;
    let ma = average_mixing_matrix(&da);
    let ml = average_mixing_matrix(&dl);
    Ok(SurveyRecord {
        graph6: write_graph6(g)?,
        n: g.order(),
        connected: g.is_connected(),
        trace_a: ma.trace(),
        trace_l: ml.trace(),
        constdiag_a: diagonal_spread(&ma.matrix().diagonal()) <= tol.check,
        constdiag_l: diagonal_spread(&ml.matrix().diagonal()) <= tol.check,
        walk_regular: is_walk_regular(&da, tol.check)?,
    })
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::Domain("worker count must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))
}

/// One record per graph, in input order.
pub fn survey_graphs(graphs: &[Graph], tol: &Tolerances, workers: usize) -> Result<Vec<SurveyRecord>> {
    if workers == 1 {
        return graphs.iter().map(|g| survey_record(g, tol)).collect();
    }
    thread_pool(workers)?.install(|| graphs.par_iter().map(|g| survey_record(g, tol)).collect())
}

/// A corpus line that could not be parsed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOutcome {
    pub records: Vec<SurveyRecord>,
    pub errors: Vec<LineError>,
}

/// Reads newline-delimited graph6, skipping blank lines.
///
/// Unparseable lines are collected in [`SurveyOutcome::errors`]; with
/// `strict` the first one aborts the scan instead.
pub fn read_corpus(reader: impl BufRead, strict: bool) -> Result<(Vec<Graph>, Vec<LineError>)> {
    let mut graphs = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        match parse_graph6(text) {
            Ok(g) => graphs.push(g),
            Err(e) => {
                let message = match e {
                    Error::Parse(m) => m,
                    other => other.to_string(),
                };
                if strict {
                    return Err(Error::Parse(format!("line {}: {message}", i + 1)));
                }
                errors.push(LineError { line: i + 1, message });
            }
        }
    }
    Ok((graphs, errors))
}

pub fn survey_corpus(
    reader: impl BufRead,
    tol: &Tolerances,
    workers: usize,
    strict: bool,
) -> Result<SurveyOutcome> {
    let (graphs, errors) = read_corpus(reader, strict)?;
    Ok(SurveyOutcome {
        records: survey_graphs(&graphs, tol, workers)?,
        errors,
    })
}

/// Built-in corpus: every graph on `n` vertices (see [`enumerate_graphs`]).
pub fn builtin_corpus(n: usize) -> Result<Vec<Graph>> {
    Ok(enumerate_graphs(n)?.collect())
}

pub fn write_csv(records: &[SurveyRecord], out: impl Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer
            .serialize(r)
            .map_err(|e| Error::Domain(format!("csv output failed: {e}")))?;
    }
    writer
        .flush()
        .map_err(|e| Error::Domain(format!("csv output failed: {e}")))
}

pub fn write_json(records: &[SurveyRecord], out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(out, records).map_err(|e| Error::Domain(format!("json output failed: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

/// Extreme value of a statistic with every record attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub statistic: String,
    pub direction: Direction,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_rational: Option<String>,
    pub witnesses: Vec<String>,
}

fn common_order(records: &[SurveyRecord]) -> Result<usize> {
    let first = records
        .first()
        .ok_or_else(|| Error::Invariant("no records to summarise".into()))?
        .n;
    if let Some(r) = records.iter().find(|r| r.n != first) {
        return Err(Error::Invariant(format!(
            "records mix graphs on {first} and {} vertices",
            r.n
        )));
    }
    Ok(first)
}

pub fn extremal_trace(
    records: &[SurveyRecord],
    kind: HamiltonianKind,
    direction: Direction,
) -> Result<ExtremalResult> {
    common_order(records)?;
    let values = records.iter().map(|r| r.trace(kind));
    let value = match direction {
        Direction::Min => values.fold(f64::INFINITY, f64::min),
        Direction::Max => values.fold(f64::NEG_INFINITY, f64::max),
    };
    let witnesses = records
        .iter()
        .filter(|r| (r.trace(kind) - value).abs() <= TIE_TOL)
        .map(|r| r.graph6.clone())
        .collect();
    Ok(ExtremalResult {
        statistic: format!("trace_{}", kind.tag()),
        direction,
        value,
        value_rational: rational::approximate(value).map(|f| f.to_string()),
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Table1Counts {
    #[serde(rename = "constdiag_A")]
    pub constdiag_a: usize,
    #[serde(rename = "constdiag_L")]
    pub constdiag_l: usize,
    pub walk_regular: usize,
}

pub fn table1_counts(records: &[SurveyRecord]) -> Table1Counts {
    Table1Counts {
        constdiag_a: records.iter().filter(|r| r.constdiag_a).count(),
        constdiag_l: records.iter().filter(|r| r.constdiag_l).count(),
        walk_regular: records.iter().filter(|r| r.walk_regular).count(),
    }
}

/// Outcome of comparing every connected graph against `K_n`.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub n: usize,
    pub connected_checked: usize,
    /// Graphs where `M̂_L(K_n) − M̂_L(X)` is not PSD.
    pub dominance_failures: Vec<String>,
    /// Graphs whose Laplacian trace ties with `K_n`.
    pub laplacian_trace_ties: Vec<String>,
    /// Graphs whose adjacency trace exceeds that of `K_n`.
    pub adjacency_falsifiers: Vec<String>,
    pub kn_trace: f64,
}

impl DominanceReport {
    /// True when no check failed and `K_n` alone attains the Laplacian trace.
    pub fn holds(&self) -> bool {
        let kn = Graph::complete(self.n).ok().and_then(|g| write_graph6(&g).ok());
        self.dominance_failures.is_empty()
            && self.adjacency_falsifiers.is_empty()
            && kn.is_some_and(|k| self.laplacian_trace_ties == [k])
    }
}

/// Checks `M̂_L(K_n) ⪰ M̂_L(X)` for every connected `X` on `n` vertices,
/// and searches for adjacency traces above `tr M̂_A(K_n)`.
pub fn verify_kn_dominance_over(
    graphs: impl IntoIterator<Item = Graph>,
    n: usize,
    tol: &Tolerances,
) -> Result<DominanceReport> {
    let top = kn_amm(n, HamiltonianKind::Laplacian)?;
    let kn_tr = kn_trace(n, HamiltonianKind::Adjacency)?;
    let mut report = DominanceReport {
        n,
        connected_checked: 0,
        dominance_failures: Vec::new(),
        laplacian_trace_ties: Vec::new(),
        adjacency_falsifiers: Vec::new(),
        kn_trace: kn_tr,
    };
    for g in graphs {
        if g.order() != n {
            return Err(Error::Invariant(format!(
                "expected graphs on {n} vertices, found one on {}",
                g.order()
            )));
        }
        if !g.is_connected() {
            continue;
        }
        report.connected_checked += 1;
        let g6 = write_graph6(&g)?;
        let ml = average_mixing_matrix(&spectral_decomposition(&g, HamiltonianKind::Laplacian, tol.cluster)?);
        if !psd_order(&top, ml.matrix(), tol.check)? {
            report.dominance_failures.push(g6.clone());
        }
        if (ml.trace() - kn_tr).abs() <= TIE_TOL {
            report.laplacian_trace_ties.push(g6.clone());
        }
        let ma = average_mixing_matrix(&spectral_decomposition(&g, HamiltonianKind::Adjacency, tol.cluster)?);
        if ma.trace() > kn_tr + TIE_TOL {
            report.adjacency_falsifiers.push(g6);
        }
    }
    Ok(report)
}

/// [`verify_kn_dominance_over`] on the built-in corpus.
pub fn verify_kn_dominance(n: usize, tol: &Tolerances) -> Result<DominanceReport> {
    verify_kn_dominance_over(enumerate_graphs(n)?, n, tol)
}

/// Reference values for graphs on up to nine vertices. Orders 7 to 9 need an
/// external corpus: `corpora/n7.g6` … `corpora/n9.g6` in this repository,
/// generated with `geng -q <n>`.
pub mod reference {
    /// `(n, constdiag_A, constdiag_L, walk_regular)` over all graphs on `n` vertices.
    pub const COUNTS: [(usize, usize, usize, usize); 8] = [
        (2, 2, 2, 2),
        (3, 2, 2, 2),
        (4, 7, 5, 4),
        (5, 3, 3, 3),
        (6, 15, 12, 8),
        (7, 4, 4, 4),
        (8, 48, 59, 14),
        (9, 12, 9, 9),
    ];

    /// Largest adjacency trace over connected graphs, attained by `K_n`.
    pub const MAX_TRACE_A: [(usize, f64); 6] = [
        (3, 5.0 / 3.0),
        (4, 5.0 / 2.0),
        (5, 17.0 / 5.0),
        (6, 13.0 / 3.0),
        (7, 37.0 / 7.0),
        (8, 25.0 / 4.0),
    ];

    /// Smallest Laplacian trace.
    pub const MIN_TRACE_L: [(usize, f64); 6] = [
        (3, 4.0 / 3.0),
        (4, 5.0 / 4.0),
        (5, 7.0 / 5.0),
        (6, 4.0 / 3.0),
        (7, 10.0 / 7.0),
        (8, 11.0 / 8.0),
    ];

    /// Smallest adjacency trace.
    pub const MIN_TRACE_A: [(usize, f64); 6] = [
        (3, 5.0 / 4.0),
        (4, 6.0 / 5.0),
        (5, 4.0 / 3.0),
        (6, 5.0 / 4.0),
        (7, 1.349025083599055),
        (8, 1.0 + 29.0 / 185.0),
    ];
}
