//! `coopbc`: region, threshold, oracle and simulation front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid input.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// The computation ran but a verified property does not hold.
    Check(String),
    Invalid(String),
}

impl From<coopbc_core::Error> for Failure {
    fn from(e: coopbc_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
