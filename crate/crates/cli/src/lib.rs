//! The `pairrank` command: scores comparison CSV files and runs the benchmark.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pairrank::{
    bootstrap_ci, rank, rate, Algorithm, AlgorithmParams, BootstrapSummary, ComparisonRecord,
    Error, Index, RatingResult,
};
use pairrank_bench::{default_sizes, run_benchmark, synthetic_base, DEFAULT_BASE_RECORDS};
use serde::Serialize;

mod input;

pub use input::{parse_comparisons_csv, write_comparisons_csv, CsvError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "pairrank",
    version,
    about = "Rank items from pairwise comparisons",
    args_conflicts_with_subcommands = true,
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Comparison CSV with columns left,right,winner[,weight]; standard input if omitted.
    #[arg(short, long, value_name = "FILE")]
    input: Option<PathBuf>,

    /// counting, average-win-rate, elo, bradley-terry, newman, eigen or pagerank.
    algorithm: Option<String>,

    #[command(flatten)]
    params: ParamArgs,

    /// Append 95% bootstrap bounds computed from this many resampling rounds.
    #[arg(long, value_name = "ROUNDS")]
    bootstrap: Option<usize>,

    /// Print JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    /// Elo step size.
    #[arg(long)]
    k: Option<f64>,
    /// Elo starting rating.
    #[arg(long)]
    initial: Option<f64>,
    /// Elo rating scale.
    #[arg(long)]
    scale: Option<f64>,
    /// Elo logistic base.
    #[arg(long)]
    base: Option<f64>,
    /// Convergence tolerance of the iterative methods.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Sweep limit of the iterative methods.
    #[arg(long)]
    max_iterations: Option<usize>,
    /// PageRank damping factor.
    #[arg(long)]
    damping: Option<f64>,
}

impl ParamArgs {
    fn to_params(&self) -> AlgorithmParams {
        AlgorithmParams {
            initial: self.initial,
            k: self.k,
            scale: self.scale,
            base: self.base,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            damping: self.damping,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Time every algorithm on synthetic data of growing size and print CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated dataset sizes; powers of ten from 10 to --max-size if omitted.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Largest default size.
    #[arg(long, default_value_t = pairrank_bench::DEFAULT_MAX_SIZE)]
    max_size: usize,
    /// Timed repetitions per algorithm and size.
    #[arg(long, default_value_t = pairrank_bench::DEFAULT_REPETITIONS)]
    reps: usize,
    /// Comma-separated algorithm names; all seven if omitted.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    /// Number of items in the synthetic data.
    #[arg(long, default_value_t = pairrank_bench::DEFAULT_ITEMS)]
    items: usize,
    /// Seed of the synthetic data.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(error) => {
            let code = if error.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = error.render().to_string();
            let _ = if error.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Some(Command::Bench(args)) => bench(args, stdout, stderr),
        None => score(&cli, stdin, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "pairrank: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(error: io::Error) -> Self {
        Failure::data(format!("write failed: {error}"))
    }
}

/// Library errors are the caller's fault when they concern arguments.
impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        match error {
            Error::InvalidParameter { .. } | Error::UnknownAlgorithm(_) => Failure::usage(error.to_string()),
            _ => Failure::data(error.to_string()),
        }
    }
}

fn parse_algorithm(name: &str) -> Result<Algorithm, Failure> {
    name.parse().map_err(|_| {
        let valid: Vec<&str> = Algorithm::names().collect();
        Failure::usage(format!("unknown algorithm {name:?}; valid names: {}", valid.join(", ")))
    })
}

fn read_records(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<Vec<ComparisonRecord>, Failure> {
    let parsed = match path {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_comparisons_csv(BufReader::new(file))
        }
        None => parse_comparisons_csv(stdin),
    };
    parsed.map_err(|e| match e {
        CsvError::Malformed { line: None, message } => Failure::usage(format!("cannot read input: {message}")),
        other => Failure::data(other.to_string()),
    })
}

#[derive(Serialize)]
struct JsonRow<'a> {
    item: &'a str,
    score: f64,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    algorithm: Algorithm,
    iterations: usize,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    items: Vec<JsonRow<'a>>,
}

fn score(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), Failure> {
    let name = cli
        .algorithm
        .as_deref()
        .ok_or_else(|| Failure::usage("missing algorithm name (try --help)"))?;
    let algorithm = parse_algorithm(name)?;
    if cli.bootstrap == Some(0) {
        return Err(Failure::usage("--bootstrap needs at least one round"));
    }
    let params = cli.params.to_params();
    params.validate(algorithm)?;

    let records = read_records(cli.input.as_ref(), stdin)?;
    let index = Index::build(&records);
    let result = rate(&records, Some(&index), algorithm, &params)?;
    let intervals = match cli.bootstrap {
        Some(rounds) if !records.is_empty() => {
            Some(bootstrap_ci(&records, algorithm, &params, rounds, Some(&index))?)
        }
        _ => None,
    };
    let with_bounds = cli.bootstrap.is_some();

    if cli.json {
        write_json(&result, intervals.as_ref(), with_bounds, stdout)
    } else {
        write_csv(&result, intervals.as_ref(), with_bounds, stdout)
    }
}

fn bounds(intervals: Option<&BootstrapSummary>, item: &str) -> (Option<f64>, Option<f64>) {
    intervals
        .and_then(|s| s.get(item))
        .map_or((None, None), |i| (Some(i.lower), Some(i.upper)))
}

fn write_csv(
    result: &RatingResult,
    intervals: Option<&BootstrapSummary>,
    with_bounds: bool,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let mut out = csv::Writer::from_writer(stdout);
    let mut header = vec!["item", "score", "rank"];
    if with_bounds {
        header.extend(["lower", "upper"]);
    }
    let write_err = |e: csv::Error| Failure::data(format!("write failed: {e}"));
    out.write_record(&header).map_err(write_err)?;
    for row in rank(&result.scores) {
        let mut fields = vec![row.item.clone(), format!("{:?}", row.score), row.rank.to_string()];
        if with_bounds {
            let (lower, upper) = bounds(intervals, &row.item);
            fields.push(lower.map_or(String::new(), |v| format!("{v:?}")));
            fields.push(upper.map_or(String::new(), |v| format!("{v:?}")));
        }
        out.write_record(&fields).map_err(write_err)?;
    }
    out.flush()?;
    Ok(())
}

fn write_json(
    result: &RatingResult,
    intervals: Option<&BootstrapSummary>,
    with_bounds: bool,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let ranked = rank(&result.scores);
    let items = ranked
        .iter()
        .map(|row| {
            let (lower, upper) = if with_bounds { bounds(intervals, &row.item) } else { (None, None) };
            JsonRow {
                item: &row.item,
                score: row.score,
                rank: row.rank,
                lower,
                upper,
            }
        })
        .collect();
    let output = JsonOutput {
        algorithm: result.algorithm,
        iterations: result.iterations,
        converged: result.converged,
        nu: result.tie_parameter,
        items,
    };
    serde_json::to_writer_pretty(&mut *stdout, &output).map_err(|e| Failure::data(e.to_string()))?;
    writeln!(stdout)?;
    Ok(())
}

fn bench(args: &BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let algorithms = match &args.algorithms {
        Some(names) => names.iter().map(|n| parse_algorithm(n.trim())).collect::<Result<Vec<_>, _>>()?,
        None => Algorithm::ALL.to_vec(),
    };
    let sizes = args.sizes.clone().unwrap_or_else(|| default_sizes(args.max_size));
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Failure::usage("sizes must be positive"));
    }
    if args.items < 2 {
        return Err(Failure::usage("--items must be at least 2"));
    }
    let base = synthetic_base(args.items, DEFAULT_BASE_RECORDS, args.seed);
    let report = run_benchmark(&base, &sizes, args.reps, &algorithms).map_err(|e| Failure::usage(e.to_string()))?;

    match &args.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            report.write_csv(io::BufWriter::new(file))?;
        }
        None => report.write_csv(&mut *stdout)?,
    }

    writeln!(stderr, "timer baseline: {:e} s (subtracted)", report.baseline_s)?;
    let (low, high) = (sizes[0].max(1000), *sizes.last().unwrap());
    for &algorithm in &algorithms {
        if let Some(slope) = report.loglog_slope(algorithm, low, high) {
            writeln!(stderr, "{algorithm}: log-log slope {slope:.3} over sizes {low}..{high}")?;
        }
    }
    writeln!(stderr, "total time: {:.1} s", report.elapsed.as_secs_f64())?;
    Ok(())
}
