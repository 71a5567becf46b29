mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Environment variable that sizes the worker pool. It never changes results.
const THREADS_VAR: &str = "FTFILTER_THREADS";

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match commands::run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("{THREADS_VAR} must be a positive integer, got {value:?}"))?;
    if threads == 0 {
        anyhow::bail!("{THREADS_VAR} must be at least 1");
    }
    ftfilter::exec::configure_threads(threads).map_err(anyhow::Error::msg)
}
