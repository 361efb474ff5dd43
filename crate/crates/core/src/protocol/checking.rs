//! Eavesdropper checking: Bell-pair correlation checks for the original
//! protocol and decoy-photon checks for the repaired one, plus the helpers
//! for hiding checking particles inside a transmitted sequence.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::quantum::{Basis, BellLabel, QuantumError, QubitId, Register};

/// A single checking photon in one of |0⟩, |1⟩, |+⟩, |−⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoyPhoton {
    pub basis: Basis,
    pub bit: u8,
    /// Index inside the sequence it was hidden in.
    pub position: usize,
}

/// A |Φ+⟩ pair whose halves ride in the first and second sequences at the
/// same position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckingPair {
    pub position: usize,
    pub first: QubitId,
    pub second: QubitId,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub checked: usize,
    pub errors: usize,
}

impl CheckTally {
    /// Fraction of mismatches; 0 when nothing was checked.
    pub fn error_rate(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.errors as f64 / self.checked as f64
        }
    }
}

/// `count` distinct sorted positions in a sequence of `total` slots.
pub fn random_positions<R: Rng + ?Sized>(total: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let mut positions = index::sample(rng, total, count).into_vec();
    positions.sort_unstable();
    positions
}

/// Places `checks[k]` at `positions[k]` and fills the rest with `message`
/// in order.
pub fn interleave(message: &[QubitId], checks: &[QubitId], positions: &[usize]) -> Vec<QubitId> {
    debug_assert_eq!(checks.len(), positions.len());
    let total = message.len() + checks.len();
    let mut out = Vec::with_capacity(total);
    let (mut m, mut c) = (0, 0);
    for slot in 0..total {
        if c < positions.len() && positions[c] == slot {
            out.push(checks[c]);
            c += 1;
        } else {
            out.push(message[m]);
            m += 1;
        }
    }
    out
}

/// Splits a received sequence into (message particles, checking particles).
pub fn extract(sequence: &[QubitId], positions: &[usize]) -> (Vec<QubitId>, Vec<QubitId>) {
    let mut message = Vec::with_capacity(sequence.len() - positions.len());
    let mut checks = Vec::with_capacity(positions.len());
    let mut c = 0;
    for (slot, q) in sequence.iter().enumerate() {
        if c < positions.len() && positions[c] == slot {
            checks.push(*q);
            c += 1;
        } else {
            message.push(*q);
        }
    }
    (message, checks)
}

pub fn random_bases<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<Basis> {
    (0..count).map(|_| if rng.random_bool(0.5) { Basis::X } else { Basis::Z }).collect()
}

/// Prepares `count` decoys with uniformly random basis and bit. Positions are
/// filled in by the caller once the sequence layout is known.
pub fn prepare_decoys<R: Rng + ?Sized>(
    count: usize,
    register: &mut Register,
    rng: &mut R,
) -> (Vec<DecoyPhoton>, Vec<QubitId>) {
    let mut decoys = Vec::with_capacity(count);
    let mut qubits = Vec::with_capacity(count);
    for _ in 0..count {
        let basis = if rng.random_bool(0.5) { Basis::X } else { Basis::Z };
        let bit = rng.random_range(0..2u8);
        qubits.push(register.prepare_photon(basis, bit));
        decoys.push(DecoyPhoton { basis, bit, position: 0 });
    }
    (decoys, qubits)
}

pub fn prepare_checking_pairs(count: usize, register: &mut Register) -> Vec<(QubitId, QubitId)> {
    (0..count).map(|_| register.prepare_bell(BellLabel::PhiPlus)).collect()
}

/// Measures both halves of each pair in its announced basis and returns the
/// two outcome lists.
pub fn measure_pair_halves(
    register: &mut Register,
    first: &[QubitId],
    second: &[QubitId],
    bases: &[Basis],
) -> Result<(Vec<u8>, Vec<u8>), QuantumError> {
    let mut a = Vec::with_capacity(first.len());
    let mut b = Vec::with_capacity(second.len());
    for ((f, s), basis) in first.iter().zip(second).zip(bases) {
        a.push(register.single_measure(*f, *basis)?);
        b.push(register.single_measure(*s, *basis)?);
    }
    Ok((a, b))
}

/// Counts mismatches between the two sides of a |Φ+⟩ check, which predicts
/// equal outcomes in both Z and X.
pub fn tally_pairs(first: &[u8], second: &[u8]) -> CheckTally {
    CheckTally { checked: first.len(), errors: first.iter().zip(second).filter(|(a, b)| a != b).count() }
}

/// Bell-pair correlation check with fresh shared random bases.
pub fn bell_pair_check<R: Rng + ?Sized>(
    first_halves: &[QubitId],
    second_halves: &[QubitId],
    register: &mut Register,
    rng: &mut R,
) -> Result<f64, Error> {
    if first_halves.len() != second_halves.len() {
        return Err(Error::InvalidArgument(format!(
            "{} first halves but {} second halves",
            first_halves.len(),
            second_halves.len()
        )));
    }
    let bases = random_bases(first_halves.len(), rng);
    let (a, b) = measure_pair_halves(register, first_halves, second_halves, &bases)?;
    Ok(tally_pairs(&a, &b).error_rate())
}

/// Measures each received decoy in its preparation basis.
pub fn measure_decoys(
    register: &mut Register,
    decoys: &[DecoyPhoton],
    received: &[QubitId],
) -> Result<Vec<u8>, QuantumError> {
    decoys.iter().zip(received).map(|(d, q)| register.single_measure(*q, d.basis)).collect()
}

pub fn tally_decoys(decoys: &[DecoyPhoton], outcomes: &[u8]) -> CheckTally {
    CheckTally { checked: decoys.len(), errors: decoys.iter().zip(outcomes).filter(|(d, o)| d.bit != **o).count() }
}

/// Decoy check: measure every received decoy in its announced basis and
/// report the fraction that disagree with the prepared bit.
pub fn decoy_round_check(decoys: &[DecoyPhoton], received: &[QubitId], register: &mut Register) -> Result<f64, Error> {
    if decoys.len() != received.len() {
        return Err(Error::InvalidArgument(format!(
            "{} decoys announced but {} received",
            decoys.len(),
            received.len()
        )));
    }
    let outcomes = measure_decoys(register, decoys, received)?;
    Ok(tally_decoys(decoys, &outcomes).error_rate())
}
