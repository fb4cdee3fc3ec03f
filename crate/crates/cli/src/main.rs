// `!(x > 0.0)` guards reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;

use args::{Cli, Command};
use clap::Parser;
use commands::grid::Kind;
use std::process::ExitCode;

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::OverlapScan(a) => commands::overlap::run(&cli.global, a),
        Command::CharGrid(a) => commands::grid::run(&cli.global, a, Kind::Char),
        Command::WignerGrid(a) => commands::grid::run(&cli.global, a, Kind::Wigner),
        Command::ZeroScan(a) => commands::zeros::run(&cli.global, a),
        Command::Validate(a) => commands::validate::run(&cli.global, a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
