use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use yamabe_glue::config::{error_line, RunConfig};
use yamabe_glue::report::{analyze, energy_summary, series_report};
use yamabe_glue::verify::{run_suite, Suite};
use yamabe_glue::Error;

#[derive(Parser)]
#[command(name = "yamabe-glue", version, about = "Obstruction forms and blow-up regimes for constant solutions on sphere products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: kernel, series, obstruction forms, verdict and regime.
    Analyze {
        path: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in identity suites over reference configurations.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Glueing series coefficients `P_1, …, P_N`.
    Series {
        path: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Blow-up regime and energy profile only.
    Energy {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// An error with the config location it refers to.
struct Failure {
    path: Option<PathBuf>,
    line: Option<usize>,
    error: Error,
}

impl Failure {
    fn report(&self) {
        let msg = match &self.error {
            Error::Config(m) => m.clone(),
            other => other.to_string(),
        };
        match (&self.path, self.line) {
            (Some(p), Some(l)) => eprintln!("error: {}:{l}: {msg}", p.display()),
            (Some(p), None) if !msg.contains(&*p.to_string_lossy()) => eprintln!("error: {}: {msg}", p.display()),
            _ => eprintln!("error: {msg}"),
        }
    }
}

fn bare(error: Error) -> Failure {
    Failure { path: None, line: None, error }
}

/// Runs `f` on a loaded config, anchoring precondition failures to the
/// config line they refer to.
fn with_config<T>(path: &Path, f: impl FnOnce(&RunConfig) -> yamabe_glue::Result<T>) -> Result<T, Failure> {
    let run = RunConfig::load(path).map_err(bare)?;
    f(&run).map_err(|error| {
        let line = std::fs::read_to_string(path).ok().and_then(|text| error_line(&text, &error));
        Failure { path: Some(path.to_path_buf()), line, error }
    })
}

fn emit<T: Serialize + std::fmt::Display>(value: &T, json: bool) -> Result<(), Failure> {
    if json {
        let text = serde_json::to_string_pretty(value).map_err(|e| bare(Error::Consistency(e.to_string())))?;
        println!("{text}");
    } else {
        println!("{value}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze { path, order, json, seed } => {
            let report = with_config(&path, |run| analyze(run, order, seed))?;
            emit(&report, json)?;
            let failed: Vec<_> = report.failed_identities().collect();
            if !failed.is_empty() {
                for c in &failed {
                    eprintln!("error: identity check failed: {c}");
                }
                return Ok(1);
            }
            Ok(report.exit_code() as u8)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(bare)?;
            let checks = run_suite(suite).map_err(bare)?;
            let mut failed = 0;
            for c in &checks {
                println!("{c}");
                if !c.passed() {
                    failed += 1;
                }
            }
            println!("{} checks, {failed} failed", checks.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Series { path, order, json } => {
            let report = with_config(&path, |run| series_report(run, order))?;
            emit(&report, json)?;
            Ok(0)
        }
        Command::Energy { path, json } => {
            let summary = with_config(&path, energy_summary)?;
            emit(&summary, json)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            f.report();
            ExitCode::from(1)
        }
    }
}
