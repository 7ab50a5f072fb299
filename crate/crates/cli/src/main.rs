//! `bandit-ldim`: generate classes, compute dimensions and witnesses, check
//! the dimension inequalities, and simulate learner/adversary games.
//!
//! Exit codes: 0 success, 1 a check or bound failed, 2 usage or input error,
//! 3 a capacity cap was exceeded.

mod commands;

use std::process::ExitCode;

use clap::Parser;

use commands::{Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use bandit_ldim::Error;
        match self {
            CliError::Core(Error::Capacity { .. }) => 3,
            CliError::Core(Error::Contract(_) | Error::Invariant(_)) => 1,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}
