mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, RunConfig, MAX_M_ENV};
use error::CliError;

fn run(cli: &Cli) -> Result<bool, CliError> {
    let env_cap = std::env::var(MAX_M_ENV).ok();
    let cfg = RunConfig::from_args(&cli.common, env_cap.as_deref())?;
    let rendered = match &cli.command {
        Command::Verify => commands::verify(&cfg)?,
        Command::Constants => commands::constants(&cfg)?,
        Command::Bounds(b) => commands::bounds(&cfg, b)?,
        Command::Decompose => commands::decompose_cmd(&cfg)?,
        Command::So3Check(s) => commands::so3_check(&cfg, s)?,
    };
    output::emit(&rendered.render(cfg.format)?, cfg.out.as_deref())?;
    Ok(!rendered.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("quatspin: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("quatspin: {e}");
            e.exit_code()
        }
    }
}
