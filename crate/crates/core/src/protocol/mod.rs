//! The three-party comparison protocol in its original form (Bell-pair
//! channel checks on every hop) and its repaired form (decoy photons with a
//! single end-to-end check of Alice's particles).

mod checking;
mod runner;
mod secret;
mod tap;
mod transcript;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use checking::{
    bell_pair_check, decoy_round_check, extract, interleave, measure_decoys, measure_pair_halves,
    prepare_checking_pairs, prepare_decoys, random_bases, random_positions, tally_decoys, tally_pairs, CheckTally,
    CheckingPair, DecoyPhoton,
};
pub use runner::{aggregate_r, run, run_improved, run_original};
pub use secret::{decode_outcome, encode_outcome, group_count, split_groups, BitString, SecretInput};
pub use tap::{Adversary, Honest, TpHoldings};
pub use transcript::{Channel, CheckScope, Message, Party, PublicMessage, Transcript};

use crate::adversary::AttackReport;
use crate::error::Error;
use crate::quantum::{BellLabel, Engine, MeasurementRecord, QubitId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    /// Bell-pair checking on each hop.
    Original,
    /// Decoy-photon checking with one end-to-end check.
    Improved,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Original => "original",
            ProtocolKind::Improved => "improved",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "original" => Ok(ProtocolKind::Original),
            "improved" => Ok(ProtocolKind::Improved),
            other => Err(format!("unknown protocol `{other}` (expected original or improved)")),
        }
    }
}

/// Which of the two disjoint final Bell measurements is simulated first.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinalOrder {
    #[default]
    BobFirst,
    TpFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// L′, checking particles per check; `None` means ⌈L/2⌉.
    pub checks: Option<usize>,
    /// A check fails when its error rate is strictly above this.
    pub threshold: f64,
    pub engine: Engine,
    pub final_order: FinalOrder,
    /// Keep every measurement's distribution in the report.
    pub record_measurements: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            checks: None,
            threshold: 0.0,
            engine: Engine::Symbolic,
            final_order: FinalOrder::BobFirst,
            record_measurements: false,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(0.0..1.0).contains(&self.threshold) {
            return Err(Error::config("threshold", format!("{} is outside [0, 1)", self.threshold)));
        }
        Ok(())
    }

    pub fn checks_for(&self, groups: usize) -> usize {
        self.checks.unwrap_or(groups)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    NotEqual,
    Aborted,
}

/// Particles prepared during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticleCounts {
    pub message: usize,
    pub checking: usize,
}

impl ParticleCounts {
    pub fn total(&self) -> usize {
        self.message + self.checking
    }
}

/// Outcome of one eavesdropping check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckScope,
    pub checked: usize,
    pub errors: usize,
    pub error_rate: f64,
    pub passed: bool,
}

/// Private state of one party at the end of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartyState {
    pub role: Party,
    pub sequences: BTreeMap<String, Vec<QubitId>>,
    /// M_j per group; `None` until measured.
    pub outcomes: Vec<Option<BellLabel>>,
}

impl PartyState {
    pub(crate) fn new(role: Party, groups: usize) -> Self {
        Self { role, sequences: BTreeMap::new(), outcomes: vec![None; groups] }
    }

    pub(crate) fn hold(&mut self, name: &str, sequence: Vec<QubitId>) {
        self.sequences.insert(name.to_owned(), sequence);
    }

    pub(crate) fn release(&mut self, name: &str) -> Vec<QubitId> {
        self.sequences.remove(name).unwrap_or_else(|| panic!("{:?} does not hold {name}", self.role))
    }

    pub(crate) fn sequence(&self, name: &str) -> &[QubitId] {
        self.sequences.get(name).unwrap_or_else(|| panic!("{:?} does not hold {name}", self.role))
    }

    pub(crate) fn record(&mut self, group: usize, label: BellLabel) {
        let slot = &mut self.outcomes[group];
        assert!(slot.is_none(), "{:?} outcome {group} written twice", self.role);
        *slot = Some(label);
    }

    /// R_j values, present once every group has been measured.
    pub fn r_values(&self) -> Option<Vec<u8>> {
        self.outcomes.iter().map(|o| o.map(encode_outcome)).collect()
    }
}

/// Everything observable about one protocol execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub protocol: ProtocolKind,
    pub verdict: Verdict,
    /// The aggregate R; absent when the run aborted.
    pub r: Option<u32>,
    pub secret_bits: usize,
    pub groups: usize,
    pub checks: Vec<CheckRecord>,
    /// Failed checks; at most one, since a failure aborts the run.
    pub detection_events: Vec<CheckRecord>,
    pub particle_counts: ParticleCounts,
    pub transcript: Transcript,
    pub parties: Vec<PartyState>,
    pub attack: Option<AttackReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement_log: Option<Vec<MeasurementRecord>>,
}

impl RunReport {
    pub fn aborted(&self) -> bool {
        self.verdict == Verdict::Aborted
    }

    pub fn party(&self, role: Party) -> &PartyState {
        self.parties.iter().find(|p| p.role == role).expect("every role is reported")
    }

    pub fn check(&self, scope: CheckScope) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check == scope)
    }
}
