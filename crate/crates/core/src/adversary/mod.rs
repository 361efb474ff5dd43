//! Attack strategies: the third party's measurement attack on the original
//! protocol, its guessing counterpart against the repaired protocol, a blind
//! measuring variant, and an external intercept-resend eavesdropper.

mod intercept;
mod tp_measure;

use serde::{Deserialize, Serialize};

pub use intercept::{intercept_resend, InterceptResend};
pub use tp_measure::{TpBlindMeasure, TpGuess, TpMeasure};

use crate::error::Error;
use crate::protocol::{Adversary, BitString, Channel, Honest, ProtocolKind, SecretInput};
use crate::quantum::BellLabel;

/// What an attacker believes at the end of a run. Group values are 2-bit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttackClaims {
    pub x_groups: Option<Vec<u8>>,
    pub y_groups: Option<Vec<u8>>,
    /// Guess of Bob's R^B_j for each group the attacker reached.
    pub bob_r_guesses: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupGuess {
    pub group: usize,
    pub guess: u8,
    pub truth: u8,
    pub correct: bool,
}

/// Attack claims graded against the ground truth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackReport {
    pub strategy: String,
    pub recovered_x: Option<BitString>,
    pub recovered_y: Option<BitString>,
    pub x_exact: Option<bool>,
    pub y_exact: Option<bool>,
    /// Guesses of R^B_j against Bob's actual value.
    pub per_group_guesses: Vec<GroupGuess>,
    /// The host run aborted on a failed check.
    pub detected: bool,
}

impl AttackReport {
    pub fn evaluate(
        strategy: &str,
        claims: AttackClaims,
        x: &SecretInput,
        y: &SecretInput,
        bob_outcomes: &[Option<BellLabel>],
        aborted: bool,
    ) -> Self {
        let recovered_x = claims.x_groups.map(|g| BitString::from_groups(&g, x.len()));
        let recovered_y = claims.y_groups.map(|g| BitString::from_groups(&g, y.len()));
        let per_group_guesses = claims
            .bob_r_guesses
            .iter()
            .enumerate()
            .filter_map(|(group, &guess)| {
                let truth = bob_outcomes.get(group).copied().flatten()?.code();
                Some(GroupGuess { group, guess, truth, correct: guess == truth })
            })
            .collect();
        Self {
            strategy: strategy.to_owned(),
            x_exact: recovered_x.as_ref().map(|r| r == x.bits()),
            y_exact: recovered_y.as_ref().map(|r| r == y.bits()),
            recovered_x,
            recovered_y,
            per_group_guesses,
            detected: aborted,
        }
    }

    /// At least one secret was claimed and every claimed secret is exact.
    pub fn full_recovery(&self) -> bool {
        let claimed = [self.x_exact, self.y_exact];
        claimed.iter().any(Option::is_some) && claimed.iter().flatten().all(|ok| *ok)
    }
}

/// Attack selection for scenarios and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum AdversaryKind {
    None,
    /// Early Bell measurement by the third party; original protocol only.
    TpMeasure,
    /// Uniform guess of the pre-swap label; repaired protocol only.
    TpGuess,
    /// Bell measurement on blindly chosen positions; repaired protocol only.
    TpBlindMeasure,
    InterceptResend {
        channel: Channel,
    },
}

impl AdversaryKind {
    /// Rejects strategies that do not apply to `protocol`.
    pub fn validate(&self, protocol: ProtocolKind) -> Result<(), Error> {
        match (self, protocol) {
            (AdversaryKind::TpMeasure, ProtocolKind::Improved) => Err(Error::config(
                "adversary",
                "the early-measurement attack needs known message positions, which the improved protocol hides",
            )),
            (AdversaryKind::TpGuess | AdversaryKind::TpBlindMeasure, ProtocolKind::Original) => {
                Err(Error::config("adversary", "this strategy targets the improved protocol"))
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Box<dyn Adversary + Send> {
        match *self {
            AdversaryKind::None => Box::new(Honest),
            AdversaryKind::TpMeasure => Box::new(TpMeasure::default()),
            AdversaryKind::TpGuess => Box::new(TpGuess::default()),
            AdversaryKind::TpBlindMeasure => Box::new(TpBlindMeasure::default()),
            AdversaryKind::InterceptResend { channel } => Box::new(InterceptResend::new(channel)),
        }
    }
}
