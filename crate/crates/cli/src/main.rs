//! `schubert`: enumerate Schubert cells, build their schemes and run the
//! verification suites from the command line.
//!
//! Exit codes: 0 on success or PASS, 1 when a verification fails, 2 on a
//! usage or configuration error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cells(a) => commands::cells(a),
        Command::Scheme(a) => commands::scheme(a),
        Command::Verify(a) => commands::verify(a),
        Command::Gwp(a) => commands::gwp(a),
        Command::Gaussian(a) => commands::gaussian(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
