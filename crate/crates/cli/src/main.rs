mod args;
mod commands;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("sasinfo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
