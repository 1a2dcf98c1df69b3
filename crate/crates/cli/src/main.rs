//! `sfst`: reproducible pipelines over subsequential transducers.
//!
//! Every command writes its primary output plus a `<output>.manifest` file
//! recording the command line, configuration, seed, file hashes and wall time.

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "sfst", version, about = "Subsequential transducer benchmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a random trim machine and write its minimal form.
    Generate(GenerateArgs),
    /// Collect unique input/output pairs by random walks.
    Sample(SampleArgs),
    /// Split a dataset into train and test files.
    Split(SplitArgs),
    /// Report per-transition training coverage.
    Coverage(CoverageArgs),
    /// Learn a machine from a dataset with OSTIA.
    Ostia(OstiaArgs),
    /// Build a SCAN fragment machine.
    Scan(ScanArgs),
    /// Minimize a machine.
    Minimize(MinimizeArgs),
    /// Compare a learned machine with a target.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    states: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    sigma: u64,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    gamma: u64,
    /// Add λ as an extra equiprobable edge output.
    #[arg(long)]
    lambda_emission: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    max_rejections: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    machine: PathBuf,
    #[arg(long, default_value_t = 20_000)]
    pairs: usize,
    /// Stop probability at final states.
    #[arg(long, default_value_t = 0.10)]
    stop: f64,
    #[arg(long, default_value_t = 50)]
    max_steps: usize,
    #[arg(long, default_value_t = 1_000_000)]
    max_attempts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("kind").required(true))]
struct SplitArgs {
    #[arg(long)]
    data: PathBuf,
    /// Random split with this train share.
    #[arg(long, group = "kind")]
    fraction: Option<f64>,
    /// Train on inputs no longer than this.
    #[arg(long, group = "kind")]
    length_cutoff: Option<usize>,
    /// Random split with exactly this many train pairs.
    #[arg(long, group = "kind")]
    train_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
}

#[derive(Debug, Args)]
struct CoverageArgs {
    #[arg(long)]
    machine: PathBuf,
    /// Training data to replay.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = sfstkit::dataset::DEFAULT_COVERAGE_THRESHOLD)]
    threshold: usize,
    /// Instead, compare a length split holding this share of the data with
    /// a size-matched random split.
    #[arg(long)]
    compare_length: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct OstiaArgs {
    #[arg(long)]
    data: PathBuf,
    /// Train on a seeded random subsample of at most this many pairs
    /// (0 = all).
    #[arg(long, default_value_t = 1000)]
    max_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Let a fold give an unknown node the other side's final output.
    #[arg(long)]
    classic: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Primitives sharing the start state (jump, walk, run, look).
    #[arg(long, value_delimiter = ',', default_value = "jump")]
    primitives: Vec<String>,
    /// Add `twice` and `thrice`.
    #[arg(long)]
    repetition: bool,
    /// Replicate the machine this many times under fresh entry words.
    #[arg(long)]
    replicate: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Where to write the symbol table (default: `<out>.symbols`).
    #[arg(long)]
    symbols: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MinimizeArgs {
    #[arg(long)]
    machine: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    learned: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Held-out pairs for exact-match accuracy.
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a, &argv),
        Command::Sample(a) => commands::sample(a, &argv),
        Command::Split(a) => commands::split(a, &argv),
        Command::Coverage(a) => commands::coverage(a, &argv),
        Command::Ostia(a) => commands::ostia(a, &argv),
        Command::Scan(a) => commands::scan(a, &argv),
        Command::Minimize(a) => commands::minimize(a, &argv),
        Command::Eval(a) => commands::eval(a, &argv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
