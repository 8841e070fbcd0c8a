use std::process::ExitCode;

use clap::Parser;
use orlicz_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(execute(&cli) as u8)
}
