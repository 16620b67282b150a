use std::process::ExitCode;

use clap::Parser;
use mscale_cli::app::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mscale: {e}");
            e.exit_code()
        }
    }
}
