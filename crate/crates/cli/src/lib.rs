//! Command-line front end: `estimate`, `simulate`, `bench` and `verify`.
//!
//! Exit status: 0 success, 1 I/O or flag errors, 2 estimation or harness
//! failure, 3 identity check over tolerance. Data goes to stdout,
//! diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod error;
pub mod series_file;

pub use error::{CliError, CliResult};
use series_file::SeriesFormat;

#[derive(Debug, Parser)]
#[command(
    name = "fracwhittle",
    version,
    about = "Exact local Whittle estimation of the memory parameter d"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate d from a series file.
    Estimate(EstimateArgs),
    /// Simulate a fractionally integrated series.
    Simulate(SimulateArgs),
    /// Run the Monte Carlo replication study.
    Bench(BenchArgs),
    /// Check the exact transform identity, filter round trips and Parseval.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeanArg {
    None,
    SampleMean,
    FirstObs,
    Weighted,
}

impl From<MeanArg> for fracwhittle::MeanMode {
    fn from(m: MeanArg) -> Self {
        match m {
            MeanArg::None => Self::None,
            MeanArg::SampleMean => Self::SampleMean,
            MeanArg::FirstObs => Self::FirstObs,
            MeanArg::Weighted => Self::Weighted,
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: SeriesFormat,
    /// Column to read from a CSV file (defaults to the first).
    #[arg(long)]
    pub column: Option<String>,
    /// One of elw, lw, hc, velasco.
    #[arg(long, default_value = "elw")]
    pub estimator: String,
    /// Bandwidth; defaults to floor(n^0.65).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value = "-6,6", allow_hyphen_values = true)]
    pub bounds: String,
    #[arg(long, value_enum, default_value = "none")]
    pub mean: MeanArg,
    #[arg(long, default_value_t = 0.95)]
    pub ci_level: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub d: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Bandwidth; defaults to floor(n^0.65).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(
        long,
        allow_hyphen_values = true,
        default_value = "-3.5,-2.3,-1.7,-1.3,-0.7,-0.3,0.0,0.3,0.7,1.3,1.7,2.3,3.5"
    )]
    pub d_list: String,
    #[arg(long, default_value = "elw,lw,hc,velasco")]
    pub estimators: String,
    #[arg(long, default_value_t = 20_070_101)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write kernel density curves.
    #[arg(long)]
    pub density: bool,
    #[arg(long, default_value_t = 201)]
    pub density_points: usize,
    #[arg(long, default_value = "-6,6", allow_hyphen_values = true)]
    pub bounds: String,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "FRACWHITTLE_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "16,128,512")]
    pub n_list: String,
    #[arg(
        long,
        allow_hyphen_values = true,
        default_value = "-4.5,-2,-0.5,0,0.5,1,1.3,2.3,4.5"
    )]
    pub d_list: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random series drawn per sample size.
    #[arg(long, default_value_t = 5)]
    pub draws: u64,
}

pub(crate) fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> CliResult<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::usage(format!("invalid {what} entry '{s}'")))
        })
        .collect()
}

pub(crate) fn parse_bounds(raw: &str) -> CliResult<(f64, f64)> {
    match parse_list::<f64>(raw, "bound")?.as_slice() {
        [lo, hi] => Ok((*lo, *hi)),
        _ => Err(CliError::usage(format!(
            "--bounds expects LO,HI, got '{raw}'"
        ))),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_USAGE } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Estimate(a) => commands::estimate::run(a, out, err),
        Command::Simulate(a) => commands::simulate::run(a, out),
        Command::Bench(a) => commands::bench::run(a, out, err),
        Command::Verify(a) => commands::verify::run(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}
