//! Command-line pipelines around `dqpt-core`: configuration, output files and
//! a hashed manifest per run.
//!
//! Every run is deterministic. Work is spread over a bounded thread pool but
//! results are gathered in a fixed order, and emulation seeds derive from grid
//! indices, so the worker count never changes an output byte.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::Parser;

pub use config::{Command, Overrides, RunConfig};
pub use error::{CliError, Result};
pub use output::{Manifest, Outputs};

#[derive(Debug, Parser)]
#[command(
    name = "dqpt",
    version,
    about = "Dynamical quantum phase transitions in quenched two-band models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

/// Runs `command` with a validated config and writes its files and manifest.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Manifest> {
    let outputs = match cfg.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::config("workers", e.to_string()))?;
            pool.install(|| commands::run_command(command, cfg))?
        }
        None => commands::run_command(command, cfg)?,
    };
    log::info!("{}: {} files", command.name(), outputs.paths().count());
    output::commit(command, cfg, outputs)
}

pub fn run(cli: &Cli) -> Result<Manifest> {
    let cfg = RunConfig::load(cli.command, &cli.overrides)?;
    execute(cli.command, &cfg)
}
