mod config;
mod report;
mod run;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use thiserror::Error;

use yangian_core::checker::CheckerError;
use yangian_core::metric::MetricError;
use yangian_core::ncalgebra::AlgebraError;
use yangian_core::reps::RepError;

use config::{Cli, Command, RunConfig};
use report::{write_atomic, Report, Verdict};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Checker(#[from] CheckerError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

const EXIT_ZERO: u8 = 0;
const EXIT_NONZERO: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn verify(args: config::VerifyArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let cfg = RunConfig::from_args(args)?;
    let eval = run::evaluate(&cfg)?;
    let report = Report::new(cfg.echo(), eval);
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => write_atomic(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    eprintln!(
        "yangian: finished in {:.3} s",
        started.elapsed().as_secs_f64()
    );
    if report.has_disagreements() {
        let ids = report
            .disagreements
            .as_deref()
            .unwrap_or_default()
            .join(", ");
        eprintln!("error: symbolic and matrix backends disagree on {ids}");
        return Ok(EXIT_ERROR);
    }
    Ok(match report.verdict {
        Verdict::Zero => EXIT_ZERO,
        Verdict::Nonzero => EXIT_NONZERO,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
