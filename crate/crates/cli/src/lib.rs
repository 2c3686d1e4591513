//! Command-line front end: argument parsing, artifact writing and exit codes.
//!
//! Exit codes: 0 success, 1 other core errors, 2 usage errors,
//! 3 budget exceeded, 4 identity violation.

pub mod args;
pub mod commands;
pub mod output;
pub mod reproduce;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use oac_core::{Budget, Error};
use serde_json::json;

use crate::args::{Cli, Command};
use crate::output::{write_table, RunContext};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_IDENTITY: i32 = 4;

/// An error with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    pub fn other(message: impl Into<String>) -> Self {
        Failure { code: EXIT_ERROR, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidParameter(_) | Error::NonIntegralRate(_) | Error::LengthMismatch { .. } => {
                EXIT_USAGE
            }
            Error::TooLarge { .. } => EXIT_BUDGET,
            Error::IdentityViolation(_) => EXIT_IDENTITY,
            _ => EXIT_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Encode { .. } => "encode".into(),
        Command::Partition { .. } => "partition".into(),
        Command::Ccs { .. } => "ccs".into(),
        Command::Hds { .. } => "hds".into(),
        Command::ShiftDist { .. } => "shift-dist".into(),
        Command::PsiClosed { .. } => "psi-closed".into(),
        Command::Psi3 { .. } => "psi3".into(),
        Command::Reproduce { target } => format!("reproduce {}", target.name()),
    }
}

fn thread_count(flag: Option<usize>) -> Result<usize, Failure> {
    let from_env = match std::env::var("SPECTRA_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Failure::usage(format!("SPECTRA_THREADS={v:?} is not a thread count")))?,
        ),
        Err(_) => None,
    };
    let t = flag
        .or(from_env)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if t == 0 {
        return Err(Failure::usage("thread count must be positive"));
    }
    Ok(t)
}

/// Parses `argv`, runs the command, writes its artifacts and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, &argv) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, argv: &[String]) -> Result<(), Failure> {
    let threads = thread_count(cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::other(format!("thread pool: {e}")))?;
    let budget = Budget {
        words: cli.max_words,
        pairs: cli.max_pairs,
        shifts: cli.max_shifts,
    };
    let start = Instant::now();
    let out = pool.install(|| commands::run(&cli.command, &budget))?;
    let wall = start.elapsed().as_secs_f64();
    let name = command_name(&cli.command);
    let ctx = RunContext {
        command: &name,
        argv,
        threads,
        budget: json!({
            "max_words": budget.words.to_string(),
            "max_pairs": budget.pairs.to_string(),
            "max_shifts": budget.shifts.to_string(),
        }),
        wall_time_s: wall,
    };
    for line in &out.summary {
        println!("{line}");
    }
    for table in &out.tables {
        let (path, digest) = write_table(&cli.out, table, &ctx).map_err(Failure::other)?;
        println!("wrote {} ({} rows, sha256 {digest})", path.display(), table.rows.len());
    }
    Ok(())
}
