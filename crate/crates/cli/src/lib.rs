//! Job runner behind the `kappa` command.
//!
//! A job names a curve, a list of points and what to compute; [`run`] turns
//! command-line arguments into a job, evaluates it and writes JSON or CSV.

pub mod args;
pub mod error;
pub mod job;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, GRAMMAR};
pub use error::CliError;
pub use job::{run_job, Job, JobResult, JobSpec, PointRecord, Status};

/// Exit status: every point ok and every check passed.
pub const EXIT_OK: i32 = 0;
/// Bad flags, unreadable files, malformed expressions.
pub const EXIT_USAGE: i32 = 1;
/// Some point was degenerate, failed, or failed a check.
pub const EXIT_POINT_FAILURE: i32 = 2;

/// Reads `KAPPA_SEED`; unset means 0.
pub fn seed_from_env(value: Option<&str>) -> Result<u64, CliError> {
    match value {
        None => Ok(0),
        Some(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("KAPPA_SEED must be an unsigned integer, got {v:?}"))
        }),
    }
}

fn usage_failure(err: &mut dyn Write, e: &CliError) -> i32 {
    let _ = writeln!(err, "error: {e}\n\n{GRAMMAR}");
    EXIT_USAGE
}

/// Runs a job described by `args` (program name first) and returns the
/// exit status.
pub fn run<I, T>(args: I, seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}\n{GRAMMAR}\n");
                    EXIT_USAGE
                }
            };
        }
    };
    let prepared = seed_from_env(seed).and_then(|seed| {
        let spec = cli.job_spec()?;
        Ok((seed, spec.validate()?))
    });
    let (seed, job) = match prepared {
        Ok(p) => p,
        Err(e) => return usage_failure(err, &e),
    };
    let result = run_job(&job, seed);
    for r in result.records.iter().filter(|r| !r.is_clean()) {
        let _ = writeln!(
            err,
            "point ({}, {}): {}{}",
            r.point[0],
            r.point[1],
            r.status.name(),
            r.message
                .as_deref()
                .map(|m| format!(": {m}"))
                .unwrap_or_default()
        );
    }
    if let Err(e) = output::write(out, &result, job.output) {
        let _ = writeln!(err, "error: {}", CliError::Output(e));
        return EXIT_USAGE;
    }
    if result.all_clean() {
        EXIT_OK
    } else {
        EXIT_POINT_FAILURE
    }
}
