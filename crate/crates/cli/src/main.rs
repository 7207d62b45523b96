use std::process::ExitCode;

use clap::Parser;
use scg_cli::args::Cli;
use scg_cli::commands::ExitFailure;

fn main() -> ExitCode {
    env_logger::init();
    match scg_cli::run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<ExitFailure>().map_or(1, |f| f.code);
            ExitCode::from(code)
        }
    }
}
