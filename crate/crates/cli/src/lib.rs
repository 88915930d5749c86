//! Command-line front end: parses arguments, resolves the configuration,
//! runs one subcommand and writes a JSON or CSV report.
//!
//! Exit codes: 0 when the report passes, 1 when a check fails or a
//! computation errors, 2 for usage and configuration errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

use crate::args::Cli;
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{to_json, Envelope};

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cli(&cli) {
        Ok(pass) => i32::from(!pass),
        Err(e) => {
            eprintln!("spherepack: {e}");
            e.exit_code()
        }
    }
}

fn run_cli(cli: &Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::resolve(&cli.global)?;
    let name = commands::name(&cli.command);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let outcome = pool.install(|| commands::execute(&cli.command, &cfg))?;
    let wall_time_ms = start.elapsed().as_millis() as u64;

    let text = match cfg.output_format {
        Format::Json => to_json(&Envelope {
            command: name,
            config: &cfg,
            results: &outcome.results,
            pass: outcome.pass,
            wall_time_ms,
        })?,
        Format::Csv => match &outcome.table {
            Some(t) => t.to_csv()?,
            None => {
                return Err(CliError::Usage(format!(
                    "`{name}` has no tabular output; use --format json"
                )))
            }
        },
    };
    match &cli.global.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Output(e.to_string()))?;
        }
    }
    Ok(outcome.pass)
}
