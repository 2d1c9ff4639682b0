//! `avgmix`: average mixing matrices of continuous quantum walks from the command line.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::process::ExitCode;

use avgmix::check::{run_checks, CheckConfig};
use avgmix::graphs::{enumerate_graphs, write_graph6, MAX_ENUMERATION_ORDER};
use avgmix::mixing::{average_mixing_matrix, cesaro_average, cesaro_error_bound};
use avgmix::rational;
use avgmix::spectral::spectral_decomposition;
use avgmix::survey::{self, extremal_trace, table1_counts, Direction, SurveyRecord, Tolerances};
use avgmix::{Error, Graph, HamiltonianKind, RealMatrix};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "avgmix", version, about = "Average mixing matrices of continuous quantum walks on graphs")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Hamiltonian of the walk
    #[arg(long, short = 'H', global = true, value_enum, default_value_t = Hamiltonian::Adjacency)]
    hamiltonian: Hamiltonian,
    /// Relative tolerance for grouping equal eigenvalues
    #[arg(long, global = true, default_value_t = avgmix::DEFAULT_TOL_CLUSTER)]
    tol_cluster: f64,
    /// Absolute tolerance for structural checks
    #[arg(long, global = true, default_value_t = avgmix::DEFAULT_TOL_CHECK)]
    tol_check: f64,
    #[arg(long, short = 'f', global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Abort on the first unparseable input line instead of skipping it
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Hamiltonian {
    #[value(alias = "A")]
    Adjacency,
    #[value(alias = "L")]
    Laplacian,
}

impl From<Hamiltonian> for HamiltonianKind {
    fn from(h: Hamiltonian) -> Self {
        match h {
            Hamiltonian::Adjacency => HamiltonianKind::Adjacency,
            Hamiltonian::Laplacian => HamiltonianKind::Laplacian,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Min,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stat {
    Trace,
}

/// Where graphs come from: a graph6 string, a file of graph6 lines, or `-`/nothing for stdin.
#[derive(Args)]
struct Input {
    input: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the average mixing matrix, its trace and its properties
    Amm(Input),
    /// Tabulate traces and constant-diagonal flags for every graph in a corpus
    Survey {
        #[command(flatten)]
        input: Input,
        /// Worker threads
        #[arg(long, short = 'j', default_value_t = 1)]
        jobs: usize,
    },
    /// Smallest or largest value of a statistic over a corpus, with all witnesses
    Extremal {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Stat::Trace)]
        stat: Stat,
        #[arg(long = "dir", value_enum)]
        direction: Dir,
        /// Restrict the search to connected graphs
        #[arg(long)]
        connected: bool,
        #[arg(long, short = 'j', default_value_t = 1)]
        jobs: usize,
    },
    /// Count graphs with constant-diagonal average mixing matrices and walk-regular graphs
    Counts {
        #[command(flatten)]
        input: Input,
        #[arg(long, short = 'j', default_value_t = 1)]
        jobs: usize,
    },
    /// Print one graph6 line per isomorphism class of graphs on n vertices
    Gen {
        #[arg(long, short = 'n')]
        n: usize,
    },
    /// Distance of finite-time averages from the limit at T/100, T/10 and T
    Converge {
        #[command(flatten)]
        input: Input,
        #[arg(long = "T", short = 'T', alias = "horizon")]
        horizon: f64,
    },
    /// Validate every identity the library can cross-check on a graph
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, hide = true)]
        corrupt_for_test: bool,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::UnsupportedSize(_) | Error::Domain(_) => EXIT_INPUT,
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::input(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn open_input(input: &Input) -> Result<Box<dyn BufRead>, Failure> {
    match input.input.as_deref() {
        None | Some("-") => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(arg) if Path::new(arg).exists() => {
            let file = File::open(arg).map_err(|e| Failure::input(format!("{arg}: {e}")))?;
            Ok(Box::new(BufReader::new(file)))
        }
        Some(arg) if arg.ends_with(".g6") || arg.contains('/') => {
            Err(Failure::input(format!("{arg}: no such file")))
        }
        Some(arg) => Ok(Box::new(io::Cursor::new(arg.to_owned().into_bytes()))),
    }
}

/// All graphs of the input; bad lines are fatal under `--strict` and reported otherwise.
fn read_graphs(input: &Input, strict: bool) -> Result<Vec<Graph>, Failure> {
    let (graphs, errors) = survey::read_corpus(open_input(input)?, strict)?;
    if graphs.is_empty() {
        return Err(match errors.first() {
            Some(e) => Failure::input(format!("line {}: {}", e.line, e.message)),
            None => Failure::input("no graphs in input"),
        });
    }
    for e in &errors {
        eprintln!("warning: skipping line {}: {}", e.line, e.message);
    }
    Ok(graphs)
}

fn tolerances(opts: &Options) -> Result<Tolerances, Failure> {
    for (name, value) in [("--tol-cluster", opts.tol_cluster), ("--tol-check", opts.tol_check)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Failure::input(format!("{name} must be positive, got {value}")));
        }
    }
    Ok(Tolerances {
        cluster: opts.tol_cluster,
        check: opts.tol_check,
    })
}

/// `x` rounded to six significant digits, without trailing zeros.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..=6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// `value` followed by its rational form when one is found.
fn with_rational(x: f64) -> String {
    match rational::approximate(x) {
        Some(f) => format!("{} ({f})", sig6(x)),
        None => sig6(x),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_matrix(out: &mut impl Write, m: &RealMatrix) -> io::Result<()> {
    let cells: Vec<Vec<String>> = m.rows().map(|r| r.iter().map(|&x| sig6(x)).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        writeln!(out, "  {}", line.join("  "))?;
    }
    Ok(())
}

fn cmd_amm(opts: &Options, input: &Input, out: &mut impl Write) -> Outcome {
    let tol = tolerances(opts)?;
    let kind = HamiltonianKind::from(opts.hamiltonian);
    let mut reports = Vec::new();
    for g in read_graphs(input, opts.strict)? {
        let m = average_mixing_matrix(&spectral_decomposition(&g, kind, tol.cluster)?);
        let props = m.properties(tol.check);
        let g6 = write_graph6(&g)?;
        match opts.format {
            Format::Pretty => {
                writeln!(out, "graph {g6} (n = {}, {kind})", g.order())?;
                write_matrix(out, m.matrix())?;
                writeln!(out, "trace {}", with_rational(m.trace()))?;
                writeln!(
                    out,
                    "symmetric {}, doubly stochastic {}, psd {} (min eigenvalue {}), constant diagonal {}",
                    yes_no(props.symmetric),
                    yes_no(props.doubly_stochastic),
                    yes_no(props.psd),
                    sig6(props.min_eigenvalue),
                    yes_no(props.constant_diagonal)
                )?;
            }
            Format::Csv => {
                for row in m.matrix().rows() {
                    let cells: Vec<String> = row.iter().map(f64::to_string).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => reports.push(json!({
                "graph6": g6,
                "n": g.order(),
                "hamiltonian": kind,
                "matrix": m.matrix().rows().map(<[f64]>::to_vec).collect::<Vec<_>>(),
                "trace": m.trace(),
                "trace_rational": rational::approximate(m.trace()).map(|f| f.to_string()),
                "properties": props,
            })),
        }
    }
    if opts.format == Format::Json {
        let value = if reports.len() == 1 {
            reports.pop().unwrap()
        } else {
            serde_json::Value::Array(reports)
        };
        serde_json::to_writer_pretty(&mut *out, &value)?;
        writeln!(out)?;
    }
    Ok(())
}

fn survey_input(opts: &Options, input: &Input, jobs: usize) -> Result<Vec<SurveyRecord>, Failure> {
    let tol = tolerances(opts)?;
    Ok(survey::survey_graphs(&read_graphs(input, opts.strict)?, &tol, jobs)?)
}

fn cmd_survey(opts: &Options, input: &Input, jobs: usize, out: &mut impl Write) -> Outcome {
    let records = survey_input(opts, input, jobs)?;
    match opts.format {
        Format::Csv => survey::write_csv(&records, &mut *out)?,
        Format::Json => {
            survey::write_json(&records, &mut *out)?;
            writeln!(out)?;
        }
        Format::Pretty => {
            let width = records.iter().map(|r| r.graph6.len()).max().unwrap_or(6).max(6);
            writeln!(
                out,
                "{:<width$}  {:>2}  {:>9}  {:>9}  {:>9}  {:>11}  {:>11}  {:>12}",
                "graph6", "n", "connected", "trace_A", "trace_L", "constdiag_A", "constdiag_L", "walk_regular"
            )?;
            for r in &records {
                writeln!(
                    out,
                    "{:<width$}  {:>2}  {:>9}  {:>9}  {:>9}  {:>11}  {:>11}  {:>12}",
                    r.graph6,
                    r.n,
                    yes_no(r.connected),
                    sig6(r.trace_a),
                    sig6(r.trace_l),
                    yes_no(r.constdiag_a),
                    yes_no(r.constdiag_l),
                    yes_no(r.walk_regular)
                )?;
            }
        }
    }
    Ok(())
}

fn cmd_extremal(
    opts: &Options,
    input: &Input,
    direction: Dir,
    connected_only: bool,
    jobs: usize,
    out: &mut impl Write,
) -> Outcome {
    let mut records = survey_input(opts, input, jobs)?;
    if connected_only {
        records.retain(|r| r.connected);
        if records.is_empty() {
            return Err(Failure::input("no connected graphs in input"));
        }
    }
    let direction = match direction {
        Dir::Min => Direction::Min,
        Dir::Max => Direction::Max,
    };
    // records on different orders are a problem with the corpus, not the numerics
    let result = extremal_trace(&records, opts.hamiltonian.into(), direction).map_err(|e| match e {
        Error::Invariant(m) => Failure::input(m),
        other => other.into(),
    })?;
    match opts.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &result)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "statistic,direction,value,value_rational,witness")?;
            let dir = match direction {
                Direction::Min => "min",
                Direction::Max => "max",
            };
            for w in &result.witnesses {
                writeln!(
                    out,
                    "{},{dir},{},{},{w}",
                    result.statistic,
                    result.value,
                    result.value_rational.as_deref().unwrap_or("")
                )?;
            }
        }
        Format::Pretty => {
            writeln!(out, "{} {}", result.statistic, with_rational(result.value))?;
            writeln!(out, "value {}", result.value)?;
            writeln!(out, "witnesses ({}):", result.witnesses.len())?;
            for w in &result.witnesses {
                writeln!(out, "  {w}")?;
            }
        }
    }
    Ok(())
}

fn cmd_counts(opts: &Options, input: &Input, jobs: usize, out: &mut impl Write) -> Outcome {
    let records = survey_input(opts, input, jobs)?;
    let c = table1_counts(&records);
    match opts.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &json!({ "graphs": records.len(), "counts": c }))?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "graphs,constdiag_A,constdiag_L,walk_regular")?;
            writeln!(out, "{},{},{},{}", records.len(), c.constdiag_a, c.constdiag_l, c.walk_regular)?;
        }
        Format::Pretty => {
            writeln!(out, "graphs        {}", records.len())?;
            writeln!(out, "constdiag_A   {}", c.constdiag_a)?;
            writeln!(out, "constdiag_L   {}", c.constdiag_l)?;
            writeln!(out, "walk_regular  {}", c.walk_regular)?;
        }
    }
    Ok(())
}

fn cmd_gen(n: usize, out: &mut impl Write) -> Outcome {
    if !(1..=MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(Failure::input(format!(
            "--n must be between 1 and {MAX_ENUMERATION_ORDER}; for larger orders generate a corpus with `geng -q {n}`"
        )));
    }
    for g in enumerate_graphs(n)? {
        writeln!(out, "{}", write_graph6(&g)?)?;
    }
    Ok(())
}

fn single_graph(input: &Input, strict: bool) -> Result<Graph, Failure> {
    let mut graphs = read_graphs(input, strict)?;
    if graphs.len() != 1 {
        return Err(Failure::input(format!("expected one graph, found {}", graphs.len())));
    }
    Ok(graphs.pop().unwrap())
}

fn cmd_converge(opts: &Options, input: &Input, horizon: f64, out: &mut impl Write) -> Outcome {
    let tol = tolerances(opts)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Failure::input(format!("--T must be positive, got {horizon}")));
    }
    let g = single_graph(input, opts.strict)?;
    let d = spectral_decomposition(&g, opts.hamiltonian.into(), tol.cluster)?;
    let limit = average_mixing_matrix(&d).into_matrix();
    let mut rows = Vec::new();
    for t in [horizon / 100.0, horizon / 10.0, horizon] {
        let error = cesaro_average(&d, t)?.max_abs_diff(&limit);
        rows.push((t, error, cesaro_error_bound(&d, t)));
    }
    match opts.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|&(t, error, bound)| json!({ "T": t, "error": error, "bound": bound }))
                .collect();
            serde_json::to_writer_pretty(&mut *out, &json!({ "graph6": write_graph6(&g)?, "rows": rows }))?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "T,error,bound")?;
            for (t, error, bound) in rows {
                writeln!(out, "{t},{error},{bound}")?;
            }
        }
        Format::Pretty => {
            writeln!(out, "{:>12}  {:>12}  {:>12}", "T", "error", "bound")?;
            for (t, error, bound) in rows {
                writeln!(out, "{:>12}  {:>12}  {:>12}", sig6(t), sig6(error), sig6(bound))?;
            }
        }
    }
    Ok(())
}

fn cmd_check(opts: &Options, input: &Input, corrupt: bool, out: &mut impl Write) -> Outcome {
    let tol = tolerances(opts)?;
    let config = CheckConfig {
        tol_cluster: tol.cluster,
        tol_check: tol.check,
        corrupt,
    };
    let mut failed = 0;
    let mut reports = Vec::new();
    for g in read_graphs(input, opts.strict)? {
        let report = run_checks(&g, &config)?;
        failed += usize::from(!report.passed());
        if opts.format == Format::Pretty {
            writeln!(out, "graph {} (n = {})", report.graph6, report.n)?;
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let mut line = format!("  {status} {}", c.name);
                if let Some(r) = c.residual {
                    line.push_str(&format!(" residual {r:.2e}"));
                }
                if let Some(d) = &c.detail {
                    line.push_str(&format!(" ({d})"));
                }
                writeln!(out, "{line}")?;
            }
        } else if opts.format == Format::Csv {
            if reports.is_empty() {
                writeln!(out, "graph6,check,passed,residual")?;
            }
            for c in &report.checks {
                let residual = c.residual.map(|r| r.to_string()).unwrap_or_default();
                writeln!(out, "{},{},{},{residual}", report.graph6, c.name, c.passed)?;
            }
        }
        reports.push(report);
    }
    if opts.format == Format::Json {
        serde_json::to_writer_pretty(&mut *out, &reports)?;
        writeln!(out)?;
    }
    if failed > 0 {
        return Err(Failure {
            code: EXIT_NUMERIC,
            message: format!("{failed} of {} graphs failed validation", reports.len()),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let opts = &cli.opts;
    match &cli.command {
        Command::Amm(input) => cmd_amm(opts, input, &mut out)?,
        Command::Survey { input, jobs } => cmd_survey(opts, input, *jobs, &mut out)?,
        Command::Extremal {
            input,
            stat: Stat::Trace,
            direction,
            connected,
            jobs,
        } => cmd_extremal(opts, input, *direction, *connected, *jobs, &mut out)?,
        Command::Counts { input, jobs } => cmd_counts(opts, input, *jobs, &mut out)?,
        Command::Gen { n } => cmd_gen(*n, &mut out)?,
        Command::Converge { input, horizon } => cmd_converge(opts, input, *horizon, &mut out)?,
        Command::Check {
            input,
            corrupt_for_test,
        } => cmd_check(opts, input, *corrupt_for_test, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // a closed pipe (`avgmix gen --n 6 | head`) is not an error
        Err(f) if f.message.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
