//! Batch workbench: configuration, subcommands and canonical reports.

pub mod commands;
pub mod config;
pub mod report;

use std::collections::BTreeMap;
use std::path::Path;

pub use config::{ExperimentConfig, Resolved};
pub use report::{Check, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Io(String),
    #[error("computation failed: {0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Atlas,
    Flow,
    Aa,
}

/// Loads, validates and runs one subcommand. `tols` are `--tol` overrides,
/// applied on top of the config's `tolerances`.
pub fn run(command: Command, config: &Path, out: &Path, seed: Option<u64>, tols: &[String]) -> Result<Report, CliError> {
    let cfg = ExperimentConfig::load(config)?;
    run_config(command, cfg, out, seed, tols)
}

pub fn run_config(command: Command, cfg: ExperimentConfig, out: &Path, seed: Option<u64>, tols: &[String]) -> Result<Report, CliError> {
    let mut overrides: BTreeMap<String, f64> = cfg.tolerances.clone();
    for arg in tols {
        let (k, v) = config::parse_tol(arg)?;
        overrides.insert(k, v);
    }
    let mut resolved = cfg.resolve(seed)?;
    resolved.raw.tolerances = overrides.clone();
    match command {
        Command::Verify => commands::cmd_verify(&resolved, &overrides, out),
        Command::Atlas => commands::cmd_atlas(&resolved, &overrides, out),
        Command::Flow => commands::cmd_flow(&resolved, &overrides, out),
        Command::Aa => commands::cmd_aa(&resolved, &overrides, out),
    }
}

/// 0 when every check passes, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.pass {
        0
    } else {
        1
    }
}
