mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { netlist, out } => commands::run(netlist, out.as_deref()),
        Command::Cell {
            name,
            action,
            overrides,
            out,
        } => commands::cell(name, *action, overrides, out.as_deref()),
        Command::Verify { overrides } => commands::verify_all(overrides),
        Command::Report { overrides, format, out } => commands::report(overrides, *format, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
