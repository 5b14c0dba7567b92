use std::process::ExitCode;

use clap::Parser;
use stabwalls_cli::{Cli, Failure, EXIT_VALIDATION};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION } else { 0 });
        }
    };
    match stabwalls_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Validation(m) | Failure::Domain(m) => eprintln!("error: {m}"),
                Failure::VerifyFailed => eprintln!("verify: some suites failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
