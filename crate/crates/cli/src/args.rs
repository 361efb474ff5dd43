use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpc_core::protocol::{Channel, ProtocolKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "qpc", version, about = "Quantum private comparison simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one comparison and report the verdict and transcript.
    Run(ScenarioArgs),
    /// Run one comparison with an attacker attached and grade the attack.
    Attack(ScenarioArgs),
    /// Run many seeded trials and report rates with 3σ half-widths.
    Montecarlo(ScenarioArgs),
    /// Particle efficiency of both protocols.
    Efficiency(ScenarioArgs),
}

impl Command {
    pub fn parts(&self) -> (CommandName, &ScenarioArgs) {
        match self {
            Command::Run(a) => (CommandName::Run, a),
            Command::Attack(a) => (CommandName::Attack, a),
            Command::Montecarlo(a) => (CommandName::Montecarlo, a),
            Command::Efficiency(a) => (CommandName::Efficiency, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Run,
    Attack,
    Montecarlo,
    Efficiency,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Run => "run",
            CommandName::Attack => "attack",
            CommandName::Montecarlo => "montecarlo",
            CommandName::Efficiency => "efficiency",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryName {
    #[default]
    None,
    TpMeasure,
    TpMeasureAggressive,
    InterceptResend,
}

impl AdversaryName {
    pub fn as_str(self) -> &'static str {
        match self {
            AdversaryName::None => "none",
            AdversaryName::TpMeasure => "tp-measure",
            AdversaryName::TpMeasureAggressive => "tp-measure-aggressive",
            AdversaryName::InterceptResend => "intercept-resend",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// original or improved.
    #[arg(long, value_parser = parse_protocol)]
    pub protocol: Option<ProtocolKind>,

    #[arg(long, value_enum)]
    pub adversary: Option<AdversaryName>,

    /// Tapped channel for intercept-resend: alice-tp, tp-alice, bob-tp, tp-bob.
    #[arg(long, value_parser = parse_channel)]
    pub channel: Option<Channel>,

    /// Alice's secret as a bit string.
    #[arg(long, requires = "secret_b", conflicts_with = "length")]
    pub secret_a: Option<String>,

    /// Bob's secret as a bit string.
    #[arg(long, requires = "secret_a", conflicts_with = "length")]
    pub secret_b: Option<String>,

    /// Length of uniformly drawn secrets.
    #[arg(long)]
    pub length: Option<usize>,

    /// Checking particles per check (L′); defaults to ⌈L/2⌉.
    #[arg(long)]
    pub decoys: Option<usize>,

    /// Largest tolerated error rate of a check, in [0, 1).
    #[arg(long)]
    pub threshold: Option<f64>,

    /// Monte Carlo trial count.
    #[arg(long)]
    pub trials: Option<u64>,

    #[arg(long, env = "QPC_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_protocol(s: &str) -> Result<ProtocolKind, String> {
    s.parse()
}

fn parse_channel(s: &str) -> Result<Channel, String> {
    s.parse()
}
