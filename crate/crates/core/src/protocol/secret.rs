use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::quantum::BellLabel;

/// An ordered string of bits, written most significant first (`"1011"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self, Error> {
        if let Some(b) = bits.iter().find(|b| **b > 1) {
            return Err(Error::InvalidArgument(format!("bit value {b} is not 0 or 1")));
        }
        Ok(Self(bits))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random_range(0..2u8)).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &BitString) -> u32 {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count() as u32
    }

    /// Joins 2-bit groups back into bits, dropping padding beyond `len`.
    pub fn from_groups(groups: &[u8], len: usize) -> Self {
        let mut bits: Vec<u8> = groups.iter().flat_map(|g| [(g >> 1) & 1, g & 1]).collect();
        bits.truncate(len);
        Self(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidArgument(format!("`{other}` is not a bit"))),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A participant's secret split into 2-bit groups.
///
/// Odd-length inputs get a single `0` appended before grouping, so the last
/// group of `101` is `10`. Both inputs of a comparison have the same length
/// and therefore the same padding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecretInput {
    bits: BitString,
    groups: Vec<u8>,
}

/// Groups `bits` into ⌈L/2⌉ two-bit values.
pub fn split_groups(bits: &BitString) -> Result<SecretInput, Error> {
    if bits.is_empty() {
        return Err(Error::InvalidArgument("secret input must have at least one bit".into()));
    }
    let groups = bits.bits().chunks(2).map(|c| (c[0] << 1) | c.get(1).copied().unwrap_or(0)).collect();
    Ok(SecretInput { bits: bits.clone(), groups })
}

impl SecretInput {
    pub fn parse(s: &str) -> Result<Self, Error> {
        split_groups(&s.parse()?)
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    /// L, the unpadded bit length.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn groups(&self) -> &[u8] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn padded_bits(&self) -> BitString {
        BitString::from_groups(&self.groups, 2 * self.groups.len())
    }
}

/// Number of groups for an L-bit secret, ⌈L/2⌉.
pub fn group_count(len: usize) -> usize {
    len.div_ceil(2)
}

/// The classical value R of a Bell outcome.
pub fn encode_outcome(label: BellLabel) -> u8 {
    label.code()
}

pub fn decode_outcome(value: u8) -> BellLabel {
    BellLabel::from_code(value)
}
