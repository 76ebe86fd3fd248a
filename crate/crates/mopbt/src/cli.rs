//! Command-line interface: `run` executes an experiment config file,
//! `report` recomputes the summary table of a finished output directory.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid usage or config.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::engine::ExecutionMode;
use crate::experiment::{run_experiment, AlgorithmKind, ExperimentConfig};
use crate::report::{render_table, report_dir, summarize};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "mopbt",
    version,
    about = "Multi-objective population based training on synthetic tasks"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Sync,
    Async,
}

impl From<ModeArg> for ExecutionMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Sync => ExecutionMode::Synchronous,
            ModeArg::Async => ExecutionMode::Asynchronous,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every algorithm and seed in the config; write per-run logs plus
    /// pooled fronts, gap curves, charts, and a report to the output
    /// directory.
    Run {
        /// Experiment config file (JSON).
        config: PathBuf,
        /// Override the experiment base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the per-run worker count for every algorithm.
        #[arg(long, env = "MOPBT_WORKERS")]
        workers: Option<usize>,
        /// Override the output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Force every population-based-training run into this mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// How many runs to execute concurrently.
        #[arg(long)]
        parallel_runs: Option<usize>,
    },
    /// Print the per-algorithm summary table for a finished experiment
    /// directory (and rewrite its report.csv).
    Report {
        /// Output directory of a previous `run`.
        out_dir: PathBuf,
    },
}

fn load_config(path: &PathBuf) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
    ExperimentConfig::from_json(&text)
}

/// Parses `args` (first element is the program name) and executes the
/// selected command, printing results to stdout.
pub fn run_from<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Error::config(e.to_string())),
    };
    match cli.command {
        Command::Run { config, seed, workers, out_dir, mode, parallel_runs } => {
            let mut experiment = load_config(&config)?;
            if let Some(seed) = seed {
                experiment.seed = seed;
            }
            if let Some(workers) = workers {
                experiment.workers = Some(workers);
            }
            if let Some(out_dir) = out_dir {
                experiment.out_dir = Some(out_dir);
            }
            if let Some(parallel_runs) = parallel_runs {
                experiment.parallel_runs = parallel_runs;
            }
            if let Some(mode) = mode {
                for spec in &mut experiment.algorithms {
                    if let AlgorithmKind::Pbt(engine) = &mut spec.algorithm {
                        engine.mode = mode.into();
                    }
                }
            }
            let output = run_experiment(&experiment)?;
            println!("wrote {}", output.out_dir.display());
            print!("{}", render_table(&summarize(&output.archive)?));
            Ok(())
        }
        Command::Report { out_dir } => {
            print!("{}", report_dir(&out_dir)?);
            Ok(())
        }
    }
}

/// Process entry point: runs the CLI on the real arguments and maps errors
/// to their exit codes.
pub fn main() -> i32 {
    match run_from(std::env::args_os()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
