use std::process::ExitCode;

use clap::Parser;
use zeno_lab::args::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors; everything else is a usage error
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zeno-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
