//! Command-line front end.
//!
//! `qelect run` executes a batch of seeded elections and can write a JSONL
//! trace (one line per round) and a one-row CSV summary. `qelect verify`
//! runs the symmetry-breaking identity suite.
//!
//! Exit codes: 0 success, 1 usage, 2 capacity, 3 I/O, 4 verification or
//! protocol failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::baseline::{run_classical_election, DEFAULT_MAX_ROUNDS};
use crate::election::{
    run_tani_election, run_tournament, run_w_state_election, Algorithm, ElectionTranscript,
    TANI_MAX_N, TOURNAMENT_MAX_N, W_STATE_MAX_N,
};
use crate::identities::{run_identity_suite, IdentityCheck, SuiteConfig, SUITE_MAX_K};
use crate::metrics::{summarize_trials, TrialStats};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Capacity(String),
    Io(String),
    Verification(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Capacity(_) => EXIT_CAPACITY,
            CliError::Io(_) => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Capacity(m) => write!(f, "capacity error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Verification(names) => write!(f, "verification failed: {}", names.join("; ")),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => CliError::Capacity(e.to_string()),
            Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Verification(vec![other.to_string()]),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qelect",
    version,
    about = "Seeded anonymous leader election simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a batch of seeded elections.
    Run(RunArgs),
    /// Check unitarity, zero-amplitude and oracle identities.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    WState,
    Tani2,
    Classical,
    Tournament,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::WState => Algorithm::WState,
            AlgorithmArg::Tani2 => Algorithm::Tani2,
            AlgorithmArg::Classical => Algorithm::Classical,
            AlgorithmArg::Tournament => Algorithm::Tournament,
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSONL file receiving one line per round.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// CSV file receiving the batch summary.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Round budget for the classical baseline.
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    max_rounds: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    /// Replace U by a sign-flipped copy (negative control).
    #[arg(long, hide = true)]
    corrupt_even_breaker: bool,
}

/// A fully specified batch of elections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub trace_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
    pub max_rounds: usize,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, n: usize, trials: usize, seed: u64) -> Self {
        Self {
            algorithm,
            n,
            trials,
            seed,
            trace_path: None,
            summary_path: None,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if self.max_rounds == 0 {
            return Err(CliError::Usage("--max-rounds must be at least 1".into()));
        }
        let (min, max) = match self.algorithm {
            Algorithm::WState => (1, W_STATE_MAX_N),
            Algorithm::Tani2 => (1, TANI_MAX_N),
            Algorithm::Classical => (1, usize::MAX),
            Algorithm::Tournament => (2, TOURNAMENT_MAX_N),
        };
        if self.n < min {
            return Err(CliError::Usage(format!(
                "{} needs n ≥ {min}",
                self.algorithm.as_str()
            )));
        }
        if self.n > max {
            return Err(CliError::Capacity(format!(
                "{} supports n ≤ {max}, got {}",
                self.algorithm.as_str(),
                self.n
            )));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in a batch seeded with `seed`:
/// `splitmix64(seed ^ splitmix64(trial))`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ splitmix64(trial))
}

fn run_one(spec: &RunSpec, seed: u64) -> crate::Result<ElectionTranscript> {
    match spec.algorithm {
        Algorithm::WState => run_w_state_election(spec.n, seed),
        Algorithm::Tani2 => run_tani_election(spec.n, seed),
        Algorithm::Classical => run_classical_election(spec.n, seed, spec.max_rounds),
        Algorithm::Tournament => run_tournament(spec.n, seed),
    }
}

/// Runs every trial of `spec` (in parallel) and returns the transcripts in
/// trial order.
pub fn run_trials(spec: &RunSpec) -> Result<Vec<ElectionTranscript>, CliError> {
    spec.validate()?;
    (0..spec.trials)
        .into_par_iter()
        .map(|i| run_one(spec, trial_seed(spec.seed, i as u64)))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(CliError::from)
}

#[derive(Serialize)]
struct TraceLine<'a> {
    trial: usize,
    round: usize,
    k: usize,
    branch: &'a str,
    s_bit: Option<u8>,
    values: &'a [u8],
    k_after: usize,
}

pub fn write_trace(path: &Path, transcripts: &[ElectionTranscript]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    for (trial, t) in transcripts.iter().enumerate() {
        for r in &t.rounds {
            let line = TraceLine {
                trial,
                round: r.round_index,
                k: r.k_before,
                branch: r.branch.as_str(),
                s_bit: r.s_bit,
                values: &r.values,
                k_after: r.k_after,
            };
            let json = serde_json::to_string(&line).map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out, "{json}").map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    algorithm: &'a str,
    n: usize,
    trials: usize,
    mean_rounds: f64,
    max_rounds: usize,
    chi_square: f64,
    budget_exhausted: usize,
}

pub fn write_summary(path: &Path, stats: &TrialStats) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.serialize(SummaryRow {
        algorithm: stats.algorithm.as_str(),
        n: stats.n,
        trials: stats.trials,
        mean_rounds: stats.mean_rounds,
        max_rounds: stats.max_rounds,
        chi_square: stats.chi_square_uniformity,
        budget_exhausted: stats.budget_exhausted_count,
    })
    .map_err(io)?;
    w.flush()
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Runs the batch, writes the requested files and returns the statistics.
pub fn run(spec: &RunSpec) -> Result<TrialStats, CliError> {
    let transcripts = run_trials(spec)?;
    let stats = summarize_trials(&transcripts)?;
    if let Some(path) = &spec.trace_path {
        write_trace(path, &transcripts)?;
    }
    if let Some(path) = &spec.summary_path {
        write_summary(path, &stats)?;
    }
    Ok(stats)
}

/// Runs the identity suite; any failing identity is an error naming it.
pub fn verify(config: &SuiteConfig) -> Result<Vec<IdentityCheck>, CliError> {
    let checks = run_identity_suite(config)?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name.clone())
        .collect();
    for c in &checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "{tag} {} (deviation {:.3e}, tolerance {:.0e})",
            c.name, c.deviation, c.tolerance
        );
    }
    if failed.is_empty() {
        Ok(checks)
    } else {
        Err(CliError::Verification(failed))
    }
}

fn print_stats(stats: &TrialStats) {
    println!("algorithm        {}", stats.algorithm.as_str());
    println!("n                {}", stats.n);
    println!("trials           {}", stats.trials);
    println!("mean_rounds      {}", stats.mean_rounds);
    println!("max_rounds       {}", stats.max_rounds);
    println!("chi_square       {}", stats.chi_square_uniformity);
    println!("budget_exhausted {}", stats.budget_exhausted_count);
    println!("winners          {:?}", stats.winner_histogram);
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let spec = RunSpec {
                algorithm: args.algorithm.into(),
                n: args.n,
                trials: args.trials,
                seed: args.seed,
                trace_path: args.trace,
                summary_path: args.summary,
                max_rounds: args.max_rounds,
            };
            print_stats(&run(&spec)?);
            Ok(())
        }
        Command::Verify(args) => {
            let mut config = match (args.k_min, args.k_max) {
                (None, None) => SuiteConfig::default(),
                (min, max) => {
                    SuiteConfig::from_range(min.unwrap_or(2), max.unwrap_or(SUITE_MAX_K))?
                }
            };
            config.corrupt_even = args.corrupt_even_breaker;
            verify(&config).map(|_| ())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
