//! The `diamdet` command line. [`run`] does all the work so tests can drive
//! it without spawning a process.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{generate, GenSpec};
use crate::graph::{load_graph, Graph, GraphFormat};
use crate::oracle::DEFAULT_ORACLE_CAP;
use crate::report::{run_estimator, Algo, EstimateReport, Params};
use crate::verify::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "diamdet", version, about = "Deterministic diameter, radius and eccentricity approximation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one estimator and print its report.
    Estimate(RunArgs),
    /// Run an estimator and the exact oracle, and check every guarantee.
    Verify(RunArgs),
    /// Time estimators over a list of instances.
    Bench(BenchArgs),
    /// Print a generated graph in the canonical text format.
    Gen(GenArgs),
    /// Exact diameter, radius and eccentricities by all-pairs search.
    Exact(ExactArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Canonical,
    DimacsGr,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Graph file; `.gr` files are read as DIMACS unless --graph-format says otherwise.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generator spec `model:params:seed`, e.g. `gnm:n=50,m=200,w=10:7`.
    #[arg(long = "gen")]
    pub gen: Option<GenSpec>,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    /// Worker threads; 0 uses one per core.
    #[arg(long, env = "DIAMDET_WORKERS", default_value_t = 0)]
    pub workers: usize,
    #[arg(long = "graph-format", value_enum)]
    pub graph_format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long = "bigL")]
    pub big_l: Option<usize>,
    #[arg(long = "oracle-cap", default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long = "oracle-cap", default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Algorithms to run, comma separated or repeated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "cgr")]
    pub algo: Vec<Algo>,
    /// Values of k for cgr and radius-ecc; one row per value.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long = "bigL")]
    pub big_l: Option<usize>,
    #[arg(long = "oracle-cap", default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
    #[arg(long)]
    pub input: Vec<PathBuf>,
    #[arg(long = "gen")]
    pub gen: Vec<GenSpec>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long = "gen")]
    pub gen: GenSpec,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_precondition() {
                EXIT_PRECONDITION
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Estimate(a) => {
            let params = params_of(&a);
            params.validate(a.algo)?;
            let g = load_source(&a.source, a.common.graph_format)?;
            let report = with_workers(a.common.workers, || run_estimator(&g, a.algo, &params))?;
            emit_report(out, &report, a.common.format)?;
            Ok(EXIT_OK)
        }
        Command::Exact(a) => {
            let params = Params {
                oracle_cap: a.oracle_cap,
                ..Params::default()
            };
            let g = load_source(&a.source, a.common.graph_format)?;
            let report = with_workers(a.common.workers, || run_estimator(&g, Algo::Exact, &params))?;
            emit_report(out, &report, a.common.format)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let params = params_of(&a);
            params.validate(a.algo)?;
            let g = load_source(&a.source, a.common.graph_format)?;
            let verdict = with_workers(a.common.workers, || verify(&g, a.algo, &params))?;
            match a.common.format {
                OutputFormat::Json => {
                    let json = serde_json::to_string(&verdict).expect("verdict serialises");
                    writeln!(out, "{json}")?;
                }
                OutputFormat::Human => {
                    out.write_all(verdict.report.to_human().as_bytes())?;
                    writeln!(out, "exact: D = {}, R = {}, M = {}", verdict.diameter, verdict.radius, verdict.max_weight)?;
                    for c in &verdict.checks {
                        writeln!(out, "{}", c.line())?;
                    }
                    writeln!(out, "verdict: {}", if verdict.passed() { "PASS" } else { "FAIL" })?;
                }
            }
            Ok(if verdict.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Bench(a) => {
            let rows = with_workers(a.common.workers, || bench(&a))?;
            match a.common.format {
                OutputFormat::Json => {
                    let json = serde_json::to_string(&rows).expect("bench rows serialise");
                    writeln!(out, "{json}")?;
                }
                OutputFormat::Human => out.write_all(bench_csv(&rows).as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Gen(a) => {
            let text = generate(&a.gen)?.to_canonical_string();
            match a.output {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn params_of(a: &RunArgs) -> Params {
    Params {
        k: a.k,
        q: a.q,
        ell: a.ell,
        big_l: a.big_l,
        oracle_cap: a.oracle_cap,
    }
}

fn emit_report(out: &mut dyn Write, report: &EstimateReport, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => writeln!(out, "{}", report.to_json())?,
        OutputFormat::Human => out.write_all(report.to_human().as_bytes())?,
    }
    Ok(())
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
    pool.install(f)
}

fn resolve_format(path: &Path, flag: Option<FormatArg>) -> GraphFormat {
    match flag {
        Some(FormatArg::Canonical) => GraphFormat::Canonical,
        Some(FormatArg::DimacsGr) => GraphFormat::DimacsGr,
        None if path.extension().is_some_and(|e| e == "gr") => GraphFormat::DimacsGr,
        None => GraphFormat::Canonical,
    }
}

pub fn load_path(path: &Path, flag: Option<FormatArg>) -> Result<Graph> {
    let file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    load_graph(BufReader::new(file), resolve_format(path, flag))
}

fn load_source(source: &Source, flag: Option<FormatArg>) -> Result<Graph> {
    match (&source.input, &source.gen) {
        (Some(path), _) => load_path(path, flag),
        (None, Some(spec)) => generate(spec),
        (None, None) => unreachable!("clap enforces one graph source"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    #[serde(flatten)]
    pub report: EstimateReport,
}

fn bench(a: &BenchArgs) -> Result<Vec<BenchRow>> {
    let mut instances = Vec::new();
    for path in &a.input {
        instances.push((path.display().to_string(), load_path(path, a.common.graph_format)?));
    }
    for spec in &a.gen {
        instances.push((spec.to_string(), generate(spec)?));
    }
    let mut rows = Vec::new();
    for (name, g) in &instances {
        for &algo in &a.algo {
            let ks: Vec<Option<usize>> = if matches!(algo, Algo::Cgr | Algo::RadiusEcc) && !a.k.is_empty() {
                a.k.iter().map(|&k| Some(k)).collect()
            } else {
                vec![None]
            };
            for k in ks {
                let params = Params {
                    k,
                    q: a.q,
                    ell: a.ell,
                    big_l: a.big_l,
                    oracle_cap: a.oracle_cap,
                };
                let report = run_estimator(g, algo, &params)?;
                rows.push(BenchRow {
                    instance: name.clone(),
                    report,
                });
            }
        }
    }
    Ok(rows)
}

const CSV_HEADER: &str = "instance,algo,n,m,k,q,ell,bigL,estimate,radius_estimate,searches,spanner_edges,set_sizes,wall_ms";

fn bench_csv(rows: &[BenchRow]) -> String {
    fn opt<T: ToString>(v: Option<T>) -> String {
        v.map(|x| x.to_string()).unwrap_or_default()
    }
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for row in rows {
        let r = &row.report;
        let sizes: Vec<String> = r.set_sizes.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let estimate = r.estimate.or(r.diameter);
        let fields = [
            row.instance.clone(),
            r.algo.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            opt(r.k),
            opt(r.q),
            opt(r.ell),
            opt(r.big_l),
            opt(estimate),
            opt(r.radius_estimate.or(r.radius)),
            opt(r.searches),
            opt(r.spanner_edges),
            sizes.join(";"),
            r.wall_time_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ];
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}
