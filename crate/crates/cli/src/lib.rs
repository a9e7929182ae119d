//! Command-line front end: resolves experiment configs, runs them and writes
//! their artifacts.

pub mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use oneshot::benchmark::{results_from_csv, results_to_csv, run_benchmark, NamedMethod, ReplicaResult};
use oneshot::metrics::{default_bound_suite, mean_and_stderr, quantile};
use oneshot::{RngSeed, Sample, SamplerSpec, Target};

pub use config::{ExperimentConfig, ExperimentKind, DEFAULT_BENCH_REPLICAS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_BOUND_FAILURE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Io(_) => "io",
        }
    }

    /// `error kind=<kind> code=<code> message="<escaped message>"`
    pub fn to_line(&self) -> String {
        format!("error kind={} code={} message={:?}", self.kind(), self.exit_code(), self.to_string())
    }
}

impl From<oneshot::Error> for CliError {
    fn from(e: oneshot::Error) -> Self {
        use oneshot::Error as E;
        match e {
            E::Numeric(_) | E::OutsideUnitInterval { .. } | E::DegenerateColumn { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "oneshot", version, about = "One-shot optimization samplers, benchmarks and bound checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Replica count (overrides the config).
    #[arg(long, global = true)]
    pub replicas: Option<usize>,
    /// Use the full-scale dimension and budget axes.
    #[arg(long, global = true)]
    pub full_grid: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the points of one sampler.
    Sample {
        #[arg(long)]
        method: Option<String>,
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(short, long)]
        d: Option<usize>,
        /// Convert the points to R^d.
        #[arg(long)]
        unbounded: bool,
    },
    /// Run the artificial benchmark and build the win table.
    Bench {
        /// Comma-separated method names.
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
    },
    /// Check every dispersion bound numerically.
    CheckBounds,
    /// Summarise a results file for plotting.
    Report {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

impl Command {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Command::Sample { .. } => ExperimentKind::Sample,
            Command::Bench { .. } => ExperimentKind::Bench,
            Command::CheckBounds => ExperimentKind::CheckBounds,
            Command::Report { .. } => ExperimentKind::Report,
        }
    }
}

/// Merges the config file (if any) with command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let kind = cli.command.kind();
    let text = match &cli.common.config {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut c = ExperimentConfig::from_toml_with(&text, Some(kind), cli.common.seed)?;
    let common = &cli.common;
    if let Some(out) = &common.out {
        c.out = out.clone();
    }
    if common.replicas.is_some() {
        c.replicas = common.replicas;
    }
    if common.jobs.is_some() {
        c.jobs = common.jobs;
    }
    if common.full_grid {
        c.grid.use_full_axes();
    }
    match &cli.command {
        Command::Sample { method, n, d, unbounded } => {
            if let Some(m) = method {
                c.sample.method = m.clone();
            }
            if let Some(n) = n {
                c.sample.n = *n;
            }
            if let Some(d) = d {
                c.sample.d = *d;
            }
            if *unbounded {
                c.sample.target = Target::Unbounded;
            }
        }
        Command::Bench { methods: Some(m) } => c.methods = m.clone(),
        Command::Report { input: Some(p) } => c.report.input = Some(p.clone()),
        _ => {}
    }
    c.validate()?;
    Ok(c)
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Files written, in order.
    pub files: Vec<PathBuf>,
    /// Set when a bound check failed.
    pub bound_failure: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.bound_failure {
            EXIT_BOUND_FAILURE
        } else {
            EXIT_OK
        }
    }
}

/// Runs an experiment on a pool of `config.jobs` threads.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let (artifacts, bound_failure) = pool.install(|| produce(config))?;
    let files = write_all(&config.out, artifacts)?;
    Ok(RunOutcome { files, bound_failure })
}

type Artifacts = Vec<(&'static str, String)>;

fn produce(c: &ExperimentConfig) -> Result<(Artifacts, bool), CliError> {
    let seed = RngSeed(c.seed);
    match c.kind {
        ExperimentKind::Sample => {
            let spec = SamplerSpec::parse(&c.sample.method)?.with_target(c.sample.target);
            let rows = match spec.generate(c.sample.n, c.sample.d, seed)? {
                Sample::Cube(s) => s.to_rows(),
                Sample::Real(r) => r.to_rows(),
            };
            let header: Vec<String> = (0..c.sample.d).map(|j| format!("x{j}")).collect();
            Ok((vec![("points.csv", to_csv(&header, rows.iter().map(|r| r.iter().map(f64::to_string).collect()))?)], false))
        }
        ExperimentKind::Bench => {
            let methods = c
                .method_names()
                .iter()
                .map(|m| NamedMethod::parse(m))
                .collect::<Result<Vec<_>, _>>()?;
            let replicas = c.replicas.unwrap_or(DEFAULT_BENCH_REPLICAS);
            let out = run_benchmark(&methods, &c.grid.to_grid(), replicas, seed)?;
            let mut artifacts = vec![("results.csv", results_to_csv(&out.results)?)];
            if let Some(table) = out.table {
                artifacts.push(("win_table.txt", table.to_text()));
            }
            Ok((artifacts, false))
        }
        ExperimentKind::CheckBounds => {
            let reports = default_bound_suite(seed, c.replicas)?;
            let text: String = reports.iter().map(|r| r.to_line() + "\n").collect();
            Ok((vec![("bounds.txt", text)], reports.iter().any(|r| !r.passed())))
        }
        ExperimentKind::Report => {
            let input = c.report.input.clone().unwrap_or_else(|| c.out.join("results.csv"));
            let text = fs::read_to_string(&input).map_err(|e| io_error(&input, e))?;
            let results = results_from_csv(&text).map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
            Ok((vec![("summary.csv", summarize(&results, &c.report.quantiles)?)], false))
        }
    }
}

fn to_csv(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(format!("csv: {e}")))
}

/// Regret summary per (function, d, d', budget, method): replica count,
/// mean regret with its standard error and the requested quantiles.
pub fn summarize(results: &[ReplicaResult], quantiles: &[f64]) -> Result<String, CliError> {
    let mut groups: BTreeMap<(String, usize, usize, usize, String), Vec<f64>> = BTreeMap::new();
    for r in results {
        groups
            .entry((r.function.to_string(), r.d, r.d_prime, r.budget, r.method.clone()))
            .or_default()
            .push(r.regret);
    }
    let mut header: Vec<String> = ["function", "d", "d_prime", "budget", "method", "replicas", "mean_regret", "stderr_regret"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(quantiles.iter().map(|q| format!("q{q}")));
    let rows = groups.into_iter().map(|((f, d, dp, b, m), regrets)| {
        let (mean, se) = mean_and_stderr(&regrets);
        let mut row = vec![f, d.to_string(), dp.to_string(), b.to_string(), m, regrets.len().to_string(), mean.to_string(), se.to_string()];
        row.extend(quantiles.iter().map(|&q| quantile(&regrets, q).to_string()));
        row
    });
    to_csv(&header, rows)
}

/// Writes every artifact, removing all of them if any write fails.
fn write_all(dir: &Path, artifacts: Artifacts) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let mut written = Vec::new();
    for (name, content) in artifacts {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, content) {
            for p in written.iter().chain(std::iter::once(&path)) {
                let _ = fs::remove_file(p);
            }
            return Err(io_error(&path, e));
        }
        written.push(path);
    }
    Ok(written)
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            let err = CliError::Config(first);
            eprintln!("{}", err.to_line());
            return err.exit_code();
        }
    };
    match resolve_config(&cli).and_then(|c| run(&c)) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.bound_failure {
                eprintln!("error kind=bound code={EXIT_BOUND_FAILURE} message=\"at least one bound check failed\"");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("{}", e.to_line());
            e.exit_code()
        }
    }
}
