use std::collections::BTreeMap;

use rand::{Rng, RngCore};

use super::AttackClaims;
use crate::protocol::{Adversary, Message, Party, PublicMessage, TpHoldings};
use crate::quantum::{BellLabel, QuantumError, Register};

/// What a third party learns by listening: its own final outcomes and the
/// published E values.
#[derive(Debug, Clone, Default)]
struct Listener {
    tp_outcomes: BTreeMap<usize, BellLabel>,
    alice_e: BTreeMap<usize, u8>,
    bob_e: BTreeMap<usize, u8>,
    groups: usize,
}

impl Listener {
    fn observe(&mut self, message: &PublicMessage) {
        if let Message::Encrypted { group, value } = message.body {
            match message.from {
                Party::Alice => {
                    self.alice_e.insert(group, value);
                }
                Party::Bob => {
                    self.bob_e.insert(group, value);
                }
                Party::Tp => {}
            }
        }
    }

    fn complete(map: &BTreeMap<usize, u8>, groups: usize) -> Option<Vec<u8>> {
        (0..groups).map(|j| map.get(&j).copied()).collect()
    }

    /// G_j = E_j ⊕ R_j for every group, if all E values were published.
    fn decrypt(e: &BTreeMap<usize, u8>, r: &[u8], groups: usize) -> Option<Vec<u8>> {
        let e = Self::complete(e, groups)?;
        (r.len() == groups).then(|| e.iter().zip(r).map(|(e, r)| e ^ r).collect())
    }

    /// Claims from a pre-swap label per group: Alice's outcome equals it,
    /// and Bob's is `pre_swap ∘ M^C_j`.
    fn claims_from(&self, pre_swap: &[BellLabel], include_x: bool) -> AttackClaims {
        let bob_r_guesses: Vec<u8> = pre_swap
            .iter()
            .enumerate()
            .map_while(|(j, p)| self.tp_outcomes.get(&j).map(|c| p.compose(*c).code()))
            .collect();
        let alice_r: Vec<u8> = pre_swap.iter().map(|p| p.code()).collect();
        AttackClaims {
            x_groups: if include_x { Self::decrypt(&self.alice_e, &alice_r, self.groups) } else { None },
            y_groups: Self::decrypt(&self.bob_e, &bob_r_guesses, self.groups),
            bob_r_guesses,
        }
    }
}

/// The third party Bell-measures each (C1, A2) pair right after the first
/// exchange. Alice's later outcome on (A1, C2) equals that label, and Bob's
/// follows from the third party's own final outcome by composition. The
/// published E values then decrypt both secrets.
#[derive(Debug, Clone, Default)]
pub struct TpMeasure {
    early: Vec<BellLabel>,
    listener: Listener,
}

impl Adversary for TpMeasure {
    fn name(&self) -> &'static str {
        "tp-measure"
    }

    fn on_public(&mut self, message: &PublicMessage) {
        self.listener.observe(message);
    }

    fn tp_before_alice_measures(
        &mut self,
        holdings: &TpHoldings<'_>,
        register: &mut Register,
        _rng: &mut dyn RngCore,
    ) -> Result<(), QuantumError> {
        self.listener.groups = holdings.own_first.len();
        if !holdings.positions_known {
            return Ok(());
        }
        self.early = holdings
            .own_first
            .iter()
            .zip(holdings.received)
            .map(|(c1, a2)| register.bell_measure(*c1, *a2))
            .collect::<Result<_, _>>()?;
        Ok(())
    }

    fn tp_outcome(&mut self, group: usize, label: BellLabel) {
        self.listener.tp_outcomes.insert(group, label);
    }

    fn claims(&mut self, _rng: &mut dyn RngCore) -> Option<AttackClaims> {
        if self.early.is_empty() {
            return None;
        }
        Some(self.listener.claims_from(&self.early, true))
    }
}

/// Against the repaired protocol the third party cannot find A2 inside the
/// decoy-laden sequence, so it guesses the pre-swap label of (C1, A2)
/// uniformly and deduces Bob's outcome from that guess.
#[derive(Debug, Clone, Default)]
pub struct TpGuess {
    listener: Listener,
}

impl Adversary for TpGuess {
    fn name(&self) -> &'static str {
        "tp-guess"
    }

    fn on_public(&mut self, message: &PublicMessage) {
        self.listener.observe(message);
    }

    fn tp_before_alice_measures(
        &mut self,
        holdings: &TpHoldings<'_>,
        _register: &mut Register,
        _rng: &mut dyn RngCore,
    ) -> Result<(), QuantumError> {
        self.listener.groups = holdings.own_first.len();
        Ok(())
    }

    fn tp_outcome(&mut self, group: usize, label: BellLabel) {
        self.listener.tp_outcomes.insert(group, label);
    }

    fn claims(&mut self, rng: &mut dyn RngCore) -> Option<AttackClaims> {
        if self.listener.groups == 0 {
            return None;
        }
        let guesses: Vec<BellLabel> =
            (0..self.listener.groups).map(|_| BellLabel::from_code(rng.random_range(0..4u8))).collect();
        Some(self.listener.claims_from(&guesses, false))
    }
}

/// Like [`TpMeasure`], but on the repaired protocol: the third party picks
/// ⌈L/2⌉ positions of the received sequence at random (keeping their order)
/// and Bell-measures them against its own first particles. Positions that
/// hold decoys disturb them, which Bob's end-to-end check may catch.
#[derive(Debug, Clone, Default)]
pub struct TpBlindMeasure {
    inner: TpMeasure,
}

impl Adversary for TpBlindMeasure {
    fn name(&self) -> &'static str {
        "tp-blind-measure"
    }

    fn on_public(&mut self, message: &PublicMessage) {
        self.inner.on_public(message);
    }

    fn tp_before_alice_measures(
        &mut self,
        holdings: &TpHoldings<'_>,
        register: &mut Register,
        rng: &mut dyn RngCore,
    ) -> Result<(), QuantumError> {
        if holdings.positions_known {
            return self.inner.tp_before_alice_measures(holdings, register, rng);
        }
        let groups = holdings.own_first.len();
        self.inner.listener.groups = groups;
        let picks = crate::protocol::random_positions(holdings.received.len(), groups, rng);
        self.inner.early = holdings
            .own_first
            .iter()
            .zip(&picks)
            .map(|(c1, p)| register.bell_measure(*c1, holdings.received[*p]))
            .collect::<Result<_, _>>()?;
        Ok(())
    }

    fn tp_outcome(&mut self, group: usize, label: BellLabel) {
        self.inner.tp_outcome(group, label);
    }

    fn claims(&mut self, rng: &mut dyn RngCore) -> Option<AttackClaims> {
        self.inner.claims(rng)
    }
}
