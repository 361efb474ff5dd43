//! Parties, channels, and the public classical record.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::quantum::Basis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Party {
    Alice,
    Bob,
    Tp,
}

/// Directed quantum channel between a participant and the third party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    #[serde(rename = "alice-tp")]
    AliceToTp,
    #[serde(rename = "tp-alice")]
    TpToAlice,
    #[serde(rename = "bob-tp")]
    BobToTp,
    #[serde(rename = "tp-bob")]
    TpToBob,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::AliceToTp, Channel::TpToAlice, Channel::BobToTp, Channel::TpToBob];

    pub fn name(self) -> &'static str {
        match self {
            Channel::AliceToTp => "alice-tp",
            Channel::TpToAlice => "tp-alice",
            Channel::BobToTp => "bob-tp",
            Channel::TpToBob => "tp-bob",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Channel::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown channel `{s}` (expected alice-tp, tp-alice, bob-tp or tp-bob)"))
    }
}

/// What an eavesdropping check covers: one channel, or (for the repaired
/// protocol's one-time check) the whole Alice → TP → Bob path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CheckScope {
    #[serde(rename = "alice-tp")]
    AliceToTp,
    #[serde(rename = "tp-alice")]
    TpToAlice,
    #[serde(rename = "bob-tp")]
    BobToTp,
    #[serde(rename = "tp-bob")]
    TpToBob,
    #[serde(rename = "alice-tp-bob")]
    AliceTpBob,
}

impl CheckScope {
    pub fn name(self) -> &'static str {
        match self {
            CheckScope::AliceToTp => "alice-tp",
            CheckScope::TpToAlice => "tp-alice",
            CheckScope::BobToTp => "bob-tp",
            CheckScope::TpToBob => "tp-bob",
            CheckScope::AliceTpBob => "alice-tp-bob",
        }
    }

    pub fn covers(self, channel: Channel) -> bool {
        match self {
            CheckScope::AliceTpBob => matches!(channel, Channel::AliceToTp | Channel::TpToBob),
            CheckScope::AliceToTp => channel == Channel::AliceToTp,
            CheckScope::TpToAlice => channel == Channel::TpToAlice,
            CheckScope::BobToTp => channel == Channel::BobToTp,
            CheckScope::TpToBob => channel == Channel::TpToBob,
        }
    }
}

impl fmt::Display for CheckScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Body of a public classical message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Message {
    /// Positions of checking particles inside a transmitted sequence.
    CheckPositions {
        check: CheckScope,
        positions: Vec<usize>,
    },
    /// Measurement bases for the checking particles, in position order.
    CheckBases {
        check: CheckScope,
        bases: Vec<Basis>,
    },
    /// Checking outcomes published by one measuring party.
    CheckOutcomes {
        check: CheckScope,
        outcomes: Vec<u8>,
    },
    /// The analysing party's error-rate verdict.
    CheckResult {
        check: CheckScope,
        checked: usize,
        errors: usize,
        error_rate: f64,
        passed: bool,
    },
    /// E_j = R_j ⊕ G_j of one participant for group `group` (0-based).
    Encrypted {
        group: usize,
        value: u8,
    },
    /// R_j = E^A_j ⊕ E^B_j for group `group`.
    Combined {
        group: usize,
        value: u8,
    },
    /// The third party's aggregate R.
    Comparison {
        r: u32,
    },
    Abort {
        check: CheckScope,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicMessage {
    pub from: Party,
    #[serde(flatten)]
    pub body: Message,
}

/// Append-only public record of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transcript {
    entries: Vec<PublicMessage>,
}

impl Transcript {
    pub(crate) fn push(&mut self, message: PublicMessage) -> &PublicMessage {
        self.entries.push(message);
        self.entries.last().expect("just pushed")
    }

    pub fn entries(&self) -> &[PublicMessage] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Published E values of `party`, indexed by group.
    pub fn encrypted_from(&self, party: Party) -> Vec<(usize, u8)> {
        self.entries
            .iter()
            .filter(|m| m.from == party)
            .filter_map(|m| match m.body {
                Message::Encrypted { group, value } => Some((group, value)),
                _ => None,
            })
            .collect()
    }

    pub fn comparison(&self) -> Option<u32> {
        self.entries.iter().find_map(|m| match m.body {
            Message::Comparison { r } => Some(r),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_names_round_trip() {
        for c in Channel::ALL {
            assert_eq!(c.name().parse::<Channel>().unwrap(), c);
        }
        assert!("alice-bob".parse::<Channel>().is_err());
    }

    #[test]
    fn path_check_covers_both_hops() {
        assert!(CheckScope::AliceTpBob.covers(Channel::AliceToTp));
        assert!(CheckScope::AliceTpBob.covers(Channel::TpToBob));
        assert!(!CheckScope::AliceTpBob.covers(Channel::BobToTp));
    }

    #[test]
    fn transcript_lookup() {
        let mut t = Transcript::default();
        t.push(PublicMessage { from: Party::Alice, body: Message::Encrypted { group: 0, value: 2 } });
        t.push(PublicMessage { from: Party::Bob, body: Message::Encrypted { group: 0, value: 1 } });
        t.push(PublicMessage { from: Party::Tp, body: Message::Comparison { r: 3 } });
        assert_eq!(t.encrypted_from(Party::Alice), vec![(0, 2)]);
        assert_eq!(t.encrypted_from(Party::Bob), vec![(0, 1)]);
        assert_eq!(t.comparison(), Some(3));
    }
}
