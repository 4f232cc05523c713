//! `cfie` command-line driver: icosphere meshes, single solves, wavenumber
//! sweeps and convergence studies, all reported as flat CSV rows.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 a solve did
//! not reach its tolerance.

pub mod args;
mod commands;
pub mod error;
pub mod settings;
pub mod table;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::MeshGen(a) => commands::mesh_gen(a),
        Command::Solve(a) => commands::solve(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Convergence(a) => commands::convergence(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
