//! Hooks through which an attacker observes and influences a run.
//!
//! An [`Adversary`] sees every quantum transmission with transform access
//! (it may measure the particles in flight, which collapses them before the
//! receiver gets them), every public classical message read-only, and, when
//! it plays the third party, what the third party legitimately holds just
//! before Alice's Bell measurement.

use rand::RngCore;

use super::transcript::{Channel, PublicMessage};
use super::ProtocolKind;
use crate::adversary::AttackClaims;
use crate::quantum::{BellLabel, QuantumError, QubitId, Register};

/// What the third party holds after the first exchange (and its checks).
#[derive(Debug, Clone)]
pub struct TpHoldings<'a> {
    pub protocol: ProtocolKind,
    /// S^C_1: first particles of the third party's own pairs, by group.
    pub own_first: &'a [QubitId],
    /// The sequence received from Alice. In the original protocol the
    /// checking particles have been removed and entry `j` is group `j`'s
    /// A2; in the repaired protocol decoys are still mixed in at positions
    /// the third party does not know.
    pub received: &'a [QubitId],
    pub positions_known: bool,
}

pub trait Adversary {
    fn name(&self) -> &'static str;

    /// Called for every quantum sequence as it crosses `channel`.
    fn on_quantum(
        &mut self,
        _channel: Channel,
        _flight: &[QubitId],
        _register: &mut Register,
        _rng: &mut dyn RngCore,
    ) -> Result<(), QuantumError> {
        Ok(())
    }

    /// Copy of every public classical message, in publication order.
    fn on_public(&mut self, _message: &PublicMessage) {}

    /// Third-party hook just before Alice's Bell measurements.
    fn tp_before_alice_measures(
        &mut self,
        _holdings: &TpHoldings<'_>,
        _register: &mut Register,
        _rng: &mut dyn RngCore,
    ) -> Result<(), QuantumError> {
        Ok(())
    }

    /// The third party's own protocol outcome M^C_j.
    fn tp_outcome(&mut self, _group: usize, _label: BellLabel) {}

    /// Final claims once the run has ended (completed or aborted).
    fn claims(&mut self, _rng: &mut dyn RngCore) -> Option<AttackClaims> {
        None
    }
}

/// No attacker at all.
#[derive(Debug, Clone, Copy, Default)]
pub struct Honest;

impl Adversary for Honest {
    fn name(&self) -> &'static str {
        "none"
    }
}
