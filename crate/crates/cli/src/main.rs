//! `bootagg`: bootstrap image aggregation from the command line.

mod aggregate;
mod args;
mod common;
mod coverage;
mod error;
mod run;
mod simulate;

use clap::Parser;

use args::{Cli, Command};
use error::EXIT_CONFIG;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too and are not failures.
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => run::run(&a),
        Command::Aggregate(a) => aggregate::run(&a),
        Command::Coverage(a) => coverage::run(&a),
        Command::Simulate(a) => simulate::run(&a),
    };
    if let Err(e) = result {
        eprintln!("bootagg: {e}");
        std::process::exit(e.exit_code());
    }
}
