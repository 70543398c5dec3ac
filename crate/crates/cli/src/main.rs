mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::CliConfig;
use crate::error::CliError;

/// Simulate SSB-based vehicle localization and its energy cost.
#[derive(Debug, Parser)]
#[command(name = "ssbloc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML experiment configuration; library defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for output files.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Worker threads for sweeps and comparisons.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Overrides the top-level seed in the configuration.
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one trajectory; writes trajectory.csv and summary.json.
    Run,
    /// Average every listed power mode over the seeds; writes dse.csv.
    Sweep,
    /// Fixed baseline against adaptive per estimator; writes compare.csv.
    Compare,
    /// Derive per-execution energies from measured mode-0 totals.
    Calibrate,
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))?;
    }
    let mut config = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    match cli.command {
        Command::Run => commands::run(&config, &cli.out),
        Command::Sweep => commands::sweep(&config, &cli.out),
        Command::Compare => commands::compare(&config, &cli.out),
        Command::Calibrate => commands::calibrate(&config, &cli.out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
