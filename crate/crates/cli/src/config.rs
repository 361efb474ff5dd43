use qpc_core::adversary::AdversaryKind;
use qpc_core::analysis::{Scenario, SecretSource};
use qpc_core::protocol::{group_count, BitString, Channel, ProtocolConfig, ProtocolKind};
use qpc_core::Error;
use serde::{Deserialize, Serialize};

use crate::args::{AdversaryName, CommandName, ScenarioArgs};

pub const DEFAULT_TRIALS: u64 = 1_000;

/// Fully resolved command-line scenario. Together with the seed it replays
/// a report exactly (see [`ScenarioConfig::to_argv`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub command: CommandName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolKind>,
    pub adversary: AdversaryName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<Channel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub secret_a: Option<BitString>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub secret_b: Option<BitString>,
    /// Set only when secrets are drawn at random.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    pub decoys: usize,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

impl ScenarioConfig {
    pub fn resolve(command: CommandName, args: &ScenarioArgs) -> Result<Self, Error> {
        if command == CommandName::Efficiency {
            return Self::resolve_efficiency(args);
        }
        let protocol = args.protocol.ok_or_else(|| Error::config("protocol", "required (original or improved)"))?;
        let adversary = args.adversary.unwrap_or_default();
        if command == CommandName::Attack && adversary == AdversaryName::None {
            return Err(Error::config("adversary", "attack needs an adversary other than none"));
        }
        match (adversary, args.channel) {
            (AdversaryName::InterceptResend, None) => {
                return Err(Error::config("channel", "intercept-resend needs --channel"));
            }
            (AdversaryName::InterceptResend, Some(_)) => {}
            (_, Some(_)) => return Err(Error::config("channel", "only used with intercept-resend")),
            _ => {}
        }
        if args.trials.is_some() && command != CommandName::Montecarlo {
            return Err(Error::config("trials", "only used by montecarlo"));
        }
        let trials = match command {
            CommandName::Montecarlo => Some(args.trials.unwrap_or(DEFAULT_TRIALS)),
            _ => None,
        };
        if trials == Some(0) {
            return Err(Error::config("trials", "must be at least 1"));
        }

        let (secret_a, secret_b, length, len) = match (&args.secret_a, &args.secret_b, args.length) {
            (Some(a), Some(b), None) => {
                let a: BitString = a.parse().map_err(|e: Error| Error::config("secret_a", e.to_string()))?;
                let b: BitString = b.parse().map_err(|e: Error| Error::config("secret_b", e.to_string()))?;
                if a.is_empty() {
                    return Err(Error::config("secret_a", "must be at least one bit"));
                }
                if a.len() != b.len() {
                    return Err(Error::config(
                        "secret_b",
                        format!("length {} differs from secret_a length {}", b.len(), a.len()),
                    ));
                }
                let len = a.len();
                (Some(a), Some(b), None, len)
            }
            (None, None, Some(0)) => return Err(Error::config("length", "must be at least 1")),
            (None, None, Some(len)) => (None, None, Some(len), len),
            (None, None, None) => {
                return Err(Error::config("length", "give --length or both --secret-a and --secret-b"));
            }
            _ => return Err(Error::config("secret_a", "--secret-a and --secret-b go together, without --length")),
        };

        let config = Self {
            command,
            protocol: Some(protocol),
            adversary,
            channel: args.channel,
            secret_a,
            secret_b,
            length,
            decoys: resolve_decoys(args.decoys, len)?,
            threshold: args.threshold.unwrap_or(0.0),
            trials,
        };
        config.scenario()?.validate()?;
        Ok(config)
    }

    fn resolve_efficiency(args: &ScenarioArgs) -> Result<Self, Error> {
        let stray = [
            ("protocol", args.protocol.is_some()),
            ("adversary", args.adversary.is_some()),
            ("channel", args.channel.is_some()),
            ("secret_a", args.secret_a.is_some() || args.secret_b.is_some()),
            ("threshold", args.threshold.is_some()),
            ("trials", args.trials.is_some()),
        ];
        if let Some((field, _)) = stray.iter().find(|(_, given)| *given) {
            return Err(Error::config(field, "not used by efficiency (it takes --length and --decoys)"));
        }
        let len = match args.length {
            None => return Err(Error::config("length", "required")),
            Some(0) => return Err(Error::config("length", "must be at least 1")),
            Some(len) => len,
        };
        Ok(Self {
            command: CommandName::Efficiency,
            protocol: None,
            adversary: AdversaryName::None,
            channel: None,
            secret_a: None,
            secret_b: None,
            length: Some(len),
            decoys: resolve_decoys(args.decoys, len)?,
            threshold: 0.0,
            trials: None,
        })
    }

    pub fn secret_len(&self) -> usize {
        self.secret_a.as_ref().map_or_else(|| self.length.unwrap_or(0), BitString::len)
    }

    /// The simulation scenario this configuration describes.
    pub fn scenario(&self) -> Result<Scenario, Error> {
        let protocol = self.protocol.ok_or_else(|| Error::config("protocol", "required (original or improved)"))?;
        let secrets = match (&self.secret_a, &self.secret_b) {
            (Some(x), Some(y)) => SecretSource::Fixed { x: x.clone(), y: y.clone() },
            _ => SecretSource::Random { length: self.length.unwrap_or(0) },
        };
        Ok(Scenario {
            protocol,
            adversary: self.adversary_kind(protocol)?,
            secrets,
            config: ProtocolConfig {
                checks: Some(self.decoys),
                threshold: self.threshold,
                ..ProtocolConfig::default()
            },
        })
    }

    fn adversary_kind(&self, protocol: ProtocolKind) -> Result<AdversaryKind, Error> {
        Ok(match (self.adversary, protocol) {
            (AdversaryName::None, _) => AdversaryKind::None,
            (AdversaryName::TpMeasure, ProtocolKind::Original) => AdversaryKind::TpMeasure,
            (AdversaryName::TpMeasure, ProtocolKind::Improved) => AdversaryKind::TpGuess,
            (AdversaryName::TpMeasureAggressive, ProtocolKind::Improved) => AdversaryKind::TpBlindMeasure,
            (AdversaryName::TpMeasureAggressive, ProtocolKind::Original) => {
                return Err(Error::config(
                    "adversary",
                    "tp-measure-aggressive targets the improved protocol; use tp-measure for original",
                ))
            }
            (AdversaryName::InterceptResend, _) => AdversaryKind::InterceptResend {
                channel: self.channel.ok_or_else(|| Error::config("channel", "intercept-resend needs --channel"))?,
            },
        })
    }

    /// Command line that reproduces this configuration under `seed`.
    pub fn to_argv(&self, seed: u64) -> Vec<String> {
        let mut argv = vec![self.command.as_str().to_owned()];
        let mut push = |flag: &str, value: String| {
            argv.push(format!("--{flag}"));
            argv.push(value);
        };
        if let Some(p) = self.protocol {
            push("protocol", p.to_string());
        }
        if self.command != CommandName::Efficiency {
            push("adversary", self.adversary.as_str().to_owned());
            push("threshold", self.threshold.to_string());
        }
        if let Some(c) = self.channel {
            push("channel", c.to_string());
        }
        if let (Some(a), Some(b)) = (&self.secret_a, &self.secret_b) {
            push("secret-a", a.to_string());
            push("secret-b", b.to_string());
        }
        if let Some(len) = self.length {
            push("length", len.to_string());
        }
        push("decoys", self.decoys.to_string());
        if let Some(t) = self.trials {
            push("trials", t.to_string());
        }
        push("seed", seed.to_string());
        argv
    }
}

fn resolve_decoys(decoys: Option<usize>, len: usize) -> Result<usize, Error> {
    match decoys {
        Some(0) => Err(Error::config("decoys", "must be at least 1")),
        Some(d) => Ok(d),
        None => Ok(group_count(len)),
    }
}
