//! Command-line driver for the `realquad` experiments.
//!
//! Every subcommand produces one [`report::Report`], written as CSV or JSON to
//! `--out` (standard output for `-`). Exit codes: 0 on success, 1 on an
//! internal consistency or I/O failure, 2 on invalid arguments.

pub mod commands;
pub mod report;
pub mod selftest;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use realquad::Error;

use report::{Format, Report};

/// Environment variable for the default worker count.
pub const THREADS_ENV: &str = "REALQUAD_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Unsigned integer flag; accepts `1e8` as well as `100000000`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v >= 0.0 && v.fract() == 0.0 && v < 18_446_744_073_709_551_616.0) {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(v as u64)
}

/// Real flag; finite values only.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "realquad", version, about = "Experiments on class numbers of real quadratic fields")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output path, `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads; defaults to $REALQUAD_THREADS, then to the number of CPUs.
    #[arg(long, global = true, value_parser = parse_count)]
    pub threads: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List squarefree d = 4n^2 + 1 <= x with q | n.
    Family {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_count, default_value = "1")]
        q: u64,
    },
    /// Compare the family count with its predicted main term.
    Density {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_count, default_value = "1")]
        q: u64,
    },
    /// Family members that split at every prime p <= y.
    Splitting {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_real)]
        y: f64,
    },
    /// Rank constructed discriminants by h log d / (sqrt(d) log log d).
    Extremes {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_real)]
        y: Option<f64>,
        #[arg(long, value_parser = parse_real)]
        z: Option<f64>,
        /// Also report the median statistic over this many random family members.
        #[arg(long, value_parser = parse_count, default_value = "0")]
        sample: u64,
        #[arg(long, value_parser = parse_count, default_value = "1")]
        seed: u64,
    },
    /// Discriminants where the truncated Euler product misses L(1, chi_d).
    LfunCensus {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long = "A", value_parser = parse_real, default_value = "2")]
        a: f64,
        /// Relative tolerance; defaults to c0 / log log x.
        #[arg(long, value_parser = parse_real)]
        tol: Option<f64>,
        #[arg(long, value_parser = parse_real, default_value = "5")]
        c0: f64,
    },
    /// Count solutions of m^2 - d n^2 = +-4 with m <= d^theta over d <= x.
    PellCensus {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_real, default_value = "1")]
        theta: f64,
        /// Restrict to fundamental discriminants.
        #[arg(long)]
        fundamental_only: bool,
    },
    /// Even moments of the tail prime sum over the family, k = 0..=K.
    Moments {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        /// Defaults to (log x)^(3/4).
        #[arg(long, value_parser = parse_real)]
        y: Option<f64>,
        /// Defaults to (log x)^2.
        #[arg(long, value_parser = parse_real)]
        z: Option<f64>,
        #[arg(long, value_parser = parse_count, default_value = "5")]
        k: u64,
        /// Sum over every n <= sqrt(x / 4), not only squarefree d.
        #[arg(long)]
        all_n: bool,
    },
    /// Empirical constant of the partial sums of ((4n^2+1)/q), odd q <= Q.
    CharsumCensus {
        #[arg(long, value_parser = parse_count)]
        q: u64,
    },
    /// Ratio of the two sides of the quadratic large sieve for random coefficients.
    SieveRatio {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long = "N", value_parser = parse_count)]
        n: u64,
        #[arg(long, value_parser = parse_count, default_value = "10")]
        trials: u64,
        #[arg(long, value_parser = parse_count, default_value = "1")]
        seed: u64,
    },
    /// Class numbers of fundamental discriminants in [from, x].
    Classnum {
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, value_parser = parse_count, default_value = "5")]
        from: u64,
    },
    /// Run the built-in identity and oracle checks.
    Selftest,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Domain(_)) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

fn thread_count(flag: Option<u64>) -> Option<usize> {
    flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| parse_count(&v).ok())).map(|t| t.max(1) as usize)
}

fn emit(report: &Report, out: &OutputArgs) -> Result<(), CliError> {
    let path = out.out.display().to_string();
    let wrap = |e: io::Error| CliError::Output { path: path.clone(), source: e };
    let sink: Box<dyn Write> =
        if path == "-" { Box::new(io::stdout().lock()) } else { Box::new(File::create(&out.out).map_err(wrap)?) };
    let mut sink = BufWriter::new(sink);
    match out.format {
        Format::Csv => {
            report.write_csv(&mut sink).map_err(|e| wrap(e.into()))?;
            eprint!("{}", report.summary_text());
        }
        Format::Json => report.write_json(&mut sink).map_err(wrap)?,
    }
    sink.flush().map_err(wrap)
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count(cli.output.threads) {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Pool(e.to_string()))?;
    let report = pool.install(|| commands::dispatch(&cli.command))?;
    emit(&report, &cli.output)?;
    if let Some((_, report::Cell::Bool(false))) = report.summary.iter().find(|(k, _)| k == "all_passed") {
        return Err(CliError::Failed("self-test failures".into()));
    }
    Ok(())
}
