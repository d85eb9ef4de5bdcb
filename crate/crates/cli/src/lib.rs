//! Command-line front end: parses a run configuration, evaluates the requested
//! densities or studies, and writes one CSV or JSON table per run.
//!
//! Exit status is 0 on success, 2 for usage errors (bad flags, invalid quantum
//! numbers), 3 for numerical failures and 1 for I/O failures. Failures print a
//! single diagnostic line to stderr and leave no partial output.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

mod commands;
pub mod config;
pub mod output;

pub use config::{Cli, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Computation(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<orbitwave_core::Error> for CliError {
    fn from(e: orbitwave_core::Error) -> Self {
        use orbitwave_core::Error as E;
        match e {
            E::InvalidQuantumNumbers { .. }
            | E::NonIntegerRatio { .. }
            | E::InvalidArgument(_)
            | E::AngularUndefinedForL0
            | E::OutOfDomain { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

/// Computes the table for `cfg` and writes it atomically; returns the path written.
pub fn run(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let table = commands::compute(cfg)?;
    let bytes = table.render(cfg)?;
    let path = cfg.output_path();
    output::write_atomic(&path, &bytes)?;
    Ok(path)
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let text = e.render().to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", line.trim_start_matches("error: ").trim());
            return 2;
        }
    };
    let result = RunConfig::from_command(cli.command).and_then(|cfg| run(&cfg));
    match result {
        Ok(path) => {
            println!("{}", path.display());
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
