//! The `qberry` command line: argument parsing, sweeps, CSV/JSON tables.
//!
//! Exit codes are 0 on success, 2 for argument errors and 3 for
//! computation errors. Failures print one line to stderr:
//! `error: kind=<Kind> detail=<message>`.

pub mod args;
pub mod commands;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Format};
pub use commands::execute;
pub use output::{Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] qberry_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "InvalidArgument",
            CliError::Compute(e) => e.kind(),
            CliError::Io { .. } => "Io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(
                qberry_core::Error::InvalidParameter(_) | qberry_core::Error::SectorOutOfRange { .. },
            ) => EXIT_USAGE,
            CliError::Compute(_) | CliError::Io { .. } => EXIT_COMPUTE,
        }
    }
}

/// Runs the whole command, including output, and returns the table.
pub fn run_cli(cli: &Cli) -> Result<Table, CliError> {
    let table = execute(&cli.command)?;
    let out = cli.command.output();
    let text = match out.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(table)
}

fn report(kind: &str, detail: &str) {
    let detail = detail.split_whitespace().collect::<Vec<_>>().join(" ");
    eprintln!("error: kind={kind} detail={detail}");
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            report("InvalidArgument", first);
            return EXIT_USAGE;
        }
    };
    match run_cli(&cli) {
        Ok(_) => EXIT_OK,
        Err(e) => {
            report(e.kind(), &e.to_string());
            e.exit_code()
        }
    }
}
