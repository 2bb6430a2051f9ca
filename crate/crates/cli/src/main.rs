//! `frakpoisson`: Mittag-Leffler tables, fractional Poisson samples and
//! verification reports.
//!
//! Exit status is 0 when every check passes, 1 when one fails and 2 on a
//! usage error.

mod args;
mod commands;

use args::{Cli, Command};
use clap::Parser;
use std::process::ExitCode;

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config or parameters.
    Usage(String),
    /// The command ran and a check failed, or I/O broke.
    Check(String),
}

impl From<frakpoisson_core::Error> for Failure {
    fn from(e: frakpoisson_core::Error) -> Self {
        use frakpoisson_core::Error as E;
        match e {
            E::Config(_) | E::InvalidParameter(_) | E::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FRAKPOISSON_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Usage(format!("FRAKPOISSON_THREADS={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Check(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Ml(a) => commands::ml(a),
        Command::Sample(a) => commands::sample(a),
        Command::Verify(a) => commands::verify(a),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
