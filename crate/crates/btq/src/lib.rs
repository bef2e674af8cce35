//! Command-line driver for `btq-core`: configuration, exporters and the
//! verification suites.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod suites;

use std::io::Write;

use anyhow::Context;
use clap::Parser;

pub use error::{CliError, CliResult};

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match cli::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("btq: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: &cli::Cli) -> CliResult<bool> {
    let rc = commands::validate(cli)?;
    if rc.dry_run {
        emit(&rc.output, &commands::dry_run_report(cli, &rc)?)?;
        return Ok(true);
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(rc.threads).build().context("starting worker threads")?;
    let outcome = pool.install(|| commands::execute(&rc))?;
    emit(&rc.output, &outcome.text)?;
    Ok(outcome.ok)
}

fn emit(path: &Option<std::path::PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).context("writing to standard output")?;
        }
    }
    Ok(())
}
