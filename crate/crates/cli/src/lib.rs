//! Command-line driver: parses a scenario, runs it and emits a JSON report.
//!
//! Exit status is 0 on success, 1 when a single run aborts on a failed
//! eavesdropping check, and 2 on any configuration or I/O error.

pub mod args;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fs;

use clap::error::ErrorKind;
use clap::Parser;
use qpc_core::analysis::{monte_carlo, particle_efficiency_with_checks, EfficiencyBreakdown, MonteCarloSummary};
use qpc_core::protocol::{BitString, ProtocolKind, RunReport};
use serde::Serialize;

use args::{Cli, CommandName};
use config::ScenarioConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABORTED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Result of one invocation: exit status plus what goes to each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(message: impl std::fmt::Display) -> Self {
        Self { code: EXIT_CONFIG, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

#[derive(Serialize)]
struct Secrets<'a> {
    a: &'a BitString,
    b: &'a BitString,
}

#[derive(Serialize)]
struct RunBody<'a> {
    secrets: Secrets<'a>,
    report: &'a RunReport,
}

#[derive(Serialize)]
struct MonteCarloBody<'a> {
    summary: &'a MonteCarloSummary,
}

#[derive(Serialize)]
struct Breakdowns {
    original: EfficiencyBreakdown,
    improved: EfficiencyBreakdown,
}

#[derive(Serialize)]
struct EfficiencyBody {
    original: f64,
    improved: f64,
    breakdown: Breakdowns,
}

/// Runs the command line `argv` (program name first).
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_CONFIG, stdout: String::new(), stderr: text },
            };
        }
    };
    let (command, args) = cli.command.parts();
    let config = match ScenarioConfig::resolve(command, args) {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let (text, code) = match execute(&config, args.seed) {
        Ok(done) => done,
        Err(message) => return Outcome::error(message),
    };
    match &args.out {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome::error(format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

/// Runs a resolved configuration; returns the report text and exit status.
pub fn execute(config: &ScenarioConfig, seed: u64) -> Result<(String, i32), String> {
    match config.command {
        CommandName::Run | CommandName::Attack => {
            let scenario = config.scenario().map_err(|e| e.to_string())?;
            let trial = scenario.run_once(seed).map_err(|e| e.to_string())?;
            let body = RunBody { secrets: Secrets { a: trial.x.bits(), b: trial.y.bits() }, report: &trial.report };
            let code = if trial.report.aborted() { EXIT_ABORTED } else { EXIT_OK };
            Ok((render(config, seed, &body)?, code))
        }
        CommandName::Montecarlo => {
            let scenario = config.scenario().map_err(|e| e.to_string())?;
            let trials = config.trials.unwrap_or(config::DEFAULT_TRIALS);
            let summary = monte_carlo(&scenario, trials, seed).map_err(|e| e.to_string())?;
            Ok((render(config, seed, &MonteCarloBody { summary: &summary })?, EXIT_OK))
        }
        CommandName::Efficiency => {
            let len = config.secret_len();
            let breakdown = |kind| particle_efficiency_with_checks(kind, len, config.decoys).map_err(|e| e.to_string());
            let original = breakdown(ProtocolKind::Original)?;
            let improved = breakdown(ProtocolKind::Improved)?;
            let body = EfficiencyBody {
                original: original.eta_f64(),
                improved: improved.eta_f64(),
                breakdown: Breakdowns { original, improved },
            };
            Ok((render(config, seed, &body)?, EXIT_OK))
        }
    }
}

fn render<T: Serialize>(config: &ScenarioConfig, seed: u64, body: &T) -> Result<String, String> {
    report::document(config, seed, body).map_err(|e| e.to_string())
}
