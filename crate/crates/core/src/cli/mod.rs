//! The `mcfe` command-line front end.
//!
//! `generate` writes a target circuit, its alternating form and mirror
//! ensembles; `run` simulates them into a dataset; `estimate` turns a dataset
//! into a fidelity estimate; `validate` runs the QAOA sweep against exact
//! fidelities.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 estimate undefined, 4 acceptance check failed.

mod commands;
pub mod config;
pub mod dataset;
pub mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use config::ModeName;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_UNDEFINED: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "mcfe", version, about = "Mirror-circuit fidelity estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the master seed from the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "mcfe-out")]
    pub out: PathBuf,
    /// Worker threads.
    #[arg(long, env = "MCFE_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the target circuit and mirror-circuit ensembles.
    Generate(Common),
    /// Simulate generated mirror circuits into an outcome dataset.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<ModeName>,
        /// Shots per circuit in shots mode.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Estimate the target's fidelity from an outcome dataset.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Dataset to read; defaults to `<out>/dataset.jsonl`.
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Run the QAOA validation sweep against exact fidelities.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<ModeName>,
        #[arg(long)]
        shots: Option<u64>,
        /// Exit with status 4 if the accuracy thresholds are not met.
        #[arg(long)]
        check: bool,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        Error::EstimateUndefined(_) => EXIT_UNDEFINED,
        _ => EXIT_DATA,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
