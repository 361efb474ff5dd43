use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{independence_test, Estimate, IndependenceTest};
use crate::adversary::AdversaryKind;
use crate::error::Error;
use crate::protocol::{run, BitString, CheckScope, ProtocolConfig, ProtocolKind, RunReport, SecretInput, Verdict};
use crate::rng::{stream_rng, trial_seed, Stream};

/// Where the secrets of each trial come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SecretSource {
    Fixed {
        x: BitString,
        y: BitString,
    },
    /// X uniform over `length` bits; Y equals X with probability 1/2 and is
    /// otherwise drawn independently.
    Random {
        length: usize,
    },
}

impl SecretSource {
    fn validate(&self) -> Result<(), Error> {
        match self {
            SecretSource::Fixed { x, y } => {
                if x.is_empty() {
                    return Err(Error::config("secret_a", "secret must be at least one bit"));
                }
                if x.len() != y.len() {
                    return Err(Error::config(
                        "secret_b",
                        format!("length {} differs from secret_a length {}", y.len(), x.len()),
                    ));
                }
                Ok(())
            }
            SecretSource::Random { length: 0 } => Err(Error::config("length", "must be at least 1")),
            SecretSource::Random { .. } => Ok(()),
        }
    }

    /// Secrets for a run seeded with `seed`, drawn from its `Secrets` stream.
    pub fn draw(&self, seed: u64) -> Result<(SecretInput, SecretInput), Error> {
        let (x, y) = match self {
            SecretSource::Fixed { x, y } => (x.clone(), y.clone()),
            SecretSource::Random { length } => {
                let mut rng = stream_rng(seed, Stream::Secrets);
                let x = BitString::random(*length, &mut rng);
                let y = if rng.random_bool(0.5) { x.clone() } else { BitString::random(*length, &mut rng) };
                (x, y)
            }
        };
        Ok((crate::protocol::split_groups(&x)?, crate::protocol::split_groups(&y)?))
    }
}

/// A fully specified experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub protocol: ProtocolKind,
    pub adversary: AdversaryKind,
    pub secrets: SecretSource,
    pub config: ProtocolConfig,
}

impl Scenario {
    pub fn new(protocol: ProtocolKind, adversary: AdversaryKind, secrets: SecretSource) -> Self {
        Self { protocol, adversary, secrets, config: ProtocolConfig::default() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.adversary.validate(self.protocol)?;
        self.secrets.validate()?;
        if self.config.checks == Some(0) {
            return Err(Error::config("decoys", "must be at least 1"));
        }
        self.config.validate()
    }

    /// One run with secrets and simulation both derived from `seed`.
    pub fn run_once(&self, seed: u64) -> Result<Trial, Error> {
        self.validate()?;
        let (x, y) = self.secrets.draw(seed)?;
        let mut adversary = self.adversary.build();
        let report = run(self.protocol, &x, &y, &self.config, seed, adversary.as_mut())?;
        Ok(Trial { x, y, report })
    }
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub x: SecretInput,
    pub y: SecretInput,
    pub report: RunReport,
}

impl Trial {
    /// Verdict and R both match the secrets.
    pub fn correct(&self) -> bool {
        let distance = self.x.bits().hamming(self.y.bits());
        let expected = if distance == 0 { Verdict::Equal } else { Verdict::NotEqual };
        self.report.verdict == expected && self.report.r == Some(distance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub root_seed: u64,
    pub completed: u64,
    /// Verdict and R correct, over completed runs.
    pub verdict_accuracy: Estimate,
    /// Runs aborted by a failed check, over all trials.
    pub detection_rate: Estimate,
    /// Runs whose attacker recovered every secret it claimed.
    pub attack_full_recovery_rate: Option<Estimate>,
    /// Attacker guesses of Bob's R^B_j, over all guessed groups.
    pub per_group_guess_accuracy: Option<Estimate>,
    pub guess_independence: Option<IndependenceTest>,
    /// Pooled errors over checked particles, per check.
    pub check_error_rates: BTreeMap<CheckScope, Estimate>,
}

/// Runs `trials` independent trials in parallel; trial `i` uses
/// `trial_seed(root_seed, i)`. Aggregation follows trial index order, so the
/// summary depends only on the inputs.
pub fn monte_carlo(scenario: &Scenario, trials: u64, root_seed: u64) -> Result<MonteCarloSummary, Error> {
    if trials < 1 {
        return Err(Error::config("trials", "must be at least 1"));
    }
    scenario.validate()?;
    let results: Vec<Trial> =
        (0..trials).into_par_iter().map(|i| scenario.run_once(trial_seed(root_seed, i))).collect::<Result<_, _>>()?;
    Ok(summarize(&results, root_seed))
}

fn summarize(trials: &[Trial], root_seed: u64) -> MonteCarloSummary {
    let mut completed = 0;
    let mut correct = 0;
    let mut aborted = 0;
    let mut attacked = 0;
    let mut recovered = 0;
    let mut guesses = 0;
    let mut hits = 0;
    let mut table = [[0u64; 4]; 4];
    let mut checks: BTreeMap<CheckScope, (u64, u64)> = BTreeMap::new();

    for trial in trials {
        let report = &trial.report;
        if report.aborted() {
            aborted += 1;
        } else {
            completed += 1;
            correct += u64::from(trial.correct());
        }
        for c in &report.checks {
            let entry = checks.entry(c.check).or_default();
            entry.0 += c.errors as u64;
            entry.1 += c.checked as u64;
        }
        if let Some(attack) = &report.attack {
            attacked += 1;
            recovered += u64::from(attack.full_recovery());
            for g in &attack.per_group_guesses {
                guesses += 1;
                hits += u64::from(g.correct);
                table[g.guess as usize][g.truth as usize] += 1;
            }
        }
    }

    MonteCarloSummary {
        trials: trials.len() as u64,
        root_seed,
        completed,
        verdict_accuracy: Estimate::new(correct, completed),
        detection_rate: Estimate::new(aborted, trials.len() as u64),
        attack_full_recovery_rate: (attacked > 0).then(|| Estimate::new(recovered, attacked)),
        per_group_guess_accuracy: (guesses > 0).then(|| Estimate::new(hits, guesses)),
        guess_independence: (guesses > 0).then(|| independence_test(&table)),
        check_error_rates: checks
            .into_iter()
            .map(|(scope, (errors, checked))| (scope, Estimate::new(errors, checked)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(protocol: ProtocolKind, adversary: AdversaryKind) -> Scenario {
        Scenario::new(protocol, adversary, SecretSource::Random { length: 6 })
    }

    #[test]
    fn honest_runs_are_always_correct() {
        for protocol in [ProtocolKind::Original, ProtocolKind::Improved] {
            let s = monte_carlo(&scenario(protocol, AdversaryKind::None), 40, 3).unwrap();
            assert_eq!(s.completed, 40);
            assert_eq!(s.verdict_accuracy.successes, 40);
            assert_eq!(s.detection_rate.successes, 0);
            assert!(s.attack_full_recovery_rate.is_none());
        }
    }

    #[test]
    fn same_root_seed_same_summary() {
        let s = scenario(ProtocolKind::Improved, AdversaryKind::TpGuess);
        assert_eq!(monte_carlo(&s, 30, 11).unwrap(), monte_carlo(&s, 30, 11).unwrap());
    }

    #[test]
    fn random_secrets_follow_the_seed() {
        let src = SecretSource::Random { length: 9 };
        let (x1, y1) = src.draw(5).unwrap();
        let (x2, y2) = src.draw(5).unwrap();
        assert_eq!((x1.bits(), y1.bits()), (x2.bits(), y2.bits()));
        assert_eq!(x1.len(), 9);
    }

    #[test]
    fn invalid_scenarios_name_the_field() {
        let bad = scenario(ProtocolKind::Improved, AdversaryKind::TpMeasure);
        assert!(matches!(monte_carlo(&bad, 1, 0), Err(Error::Config { field: "adversary", .. })));
        let zero = Scenario::new(ProtocolKind::Original, AdversaryKind::None, SecretSource::Random { length: 0 });
        assert!(matches!(zero.validate(), Err(Error::Config { field: "length", .. })));
        let ok = scenario(ProtocolKind::Original, AdversaryKind::None);
        assert!(matches!(monte_carlo(&ok, 0, 0), Err(Error::Config { field: "trials", .. })));
    }
}
