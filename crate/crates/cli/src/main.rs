//! `edgevar`: enumerate, sample and summarise graph structures, and measure
//! their structural variability.

mod commands;
mod output;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "edgevar",
    version,
    about = "Edge-level distributions and structural variability of graph collections"
)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate every DAG (or undirected graph) on N nodes and report exact moments.
    Census(commands::CensusArgs),
    /// Draw random graphs and write them as JSONL.
    Sample(commands::SampleArgs),
    /// Fit the edge distribution of a JSONL graph collection.
    Summarize(commands::SummarizeArgs),
    /// Variability measures of a fitted summary.
    Measures(commands::MeasuresArgs),
    /// Maximum-entropy reference for N nodes.
    Maxent(commands::MaxentArgs),
    /// Covariance and correlation bounds over a range of node counts, as CSV.
    Bounds(commands::BoundsArgs),
    /// Bootstrap a structure learner on a CSV dataset.
    LearnBootstrap(commands::LearnArgs),
    /// Pick the bootstrap run with the smallest variability.
    Compare(commands::CompareArgs),
    /// Pick the tuning parameter with the smallest variability.
    Tune(commands::TuneArgs),
    /// Recompute small exact censuses and compare them with the published tables.
    VerifyCensus(commands::VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    InputFormat,
    Infeasible,
    Failure,
}

impl ErrorKind {
    fn code(self) -> u8 {
        match self {
            ErrorKind::Failure => 1,
            ErrorKind::Usage => 2,
            ErrorKind::InputFormat => 3,
            ErrorKind::Infeasible => 4,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            ErrorKind::Failure => "failure",
            ErrorKind::Usage => "usage",
            ErrorKind::InputFormat => "input-format",
            ErrorKind::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Usage, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::InputFormat, message: message.into() }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Failure, message: message.into() }
    }

    pub fn output(path: &Path, e: std::io::Error) -> Self {
        CliError::failure(format!("cannot write {}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // One line, whatever the underlying message.
        let msg = self.message.replace('\n', " ");
        write!(f, "error[{}]: {}", self.kind.tag(), msg.trim())
    }
}

impl From<edgevar::Error> for CliError {
    fn from(e: edgevar::Error) -> Self {
        use edgevar::Error as E;
        let kind = match &e {
            E::Infeasible(_) => ErrorKind::Infeasible,
            E::InvalidArgument(_) => ErrorKind::Usage,
            _ => ErrorKind::InputFormat,
        };
        CliError { kind, message: e.to_string() }
    }
}

/// Seed from the flag, then `GE_SEED`, then 0.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SeedArg {
    #[arg(long, env = "GE_SEED", default_value_t = 0)]
    pub seed: u64,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::failure(format!("cannot start thread pool: {e}")))?;
    }
    match cli.command {
        Command::Census(a) => commands::census(&a),
        Command::Sample(a) => commands::sample(&a),
        Command::Summarize(a) => commands::summarize(&a),
        Command::Measures(a) => commands::measures(&a),
        Command::Maxent(a) => commands::maxent(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::LearnBootstrap(a) => commands::learn_bootstrap(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Tune(a) => commands::tune(&a),
        Command::VerifyCensus(a) => commands::verify(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let reason: Vec<&str> = text.lines().map(str::trim).take_while(|l| !l.is_empty()).collect();
            eprintln!("{}", CliError::usage(reason.join(" ").trim_start_matches("error: ")));
            return ExitCode::from(ErrorKind::Usage.code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.kind.code())
        }
    }
}
