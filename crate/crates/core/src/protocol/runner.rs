use rand_chacha::ChaCha8Rng;

use super::checking::{
    extract, interleave, measure_decoys, measure_pair_halves, prepare_checking_pairs, prepare_decoys, random_bases,
    random_positions, tally_decoys, tally_pairs, CheckTally, DecoyPhoton,
};
use super::secret::SecretInput;
use super::tap::{Adversary, TpHoldings};
use super::transcript::{Channel, CheckScope, Message, Party, PublicMessage, Transcript};
use super::{CheckRecord, FinalOrder, ParticleCounts, PartyState, ProtocolConfig, ProtocolKind, RunReport, Verdict};
use crate::adversary::AttackReport;
use crate::error::Error;
use crate::quantum::{BellLabel, QuantumError, QubitId, Register};
use crate::rng::{derive_seed, stream_rng, Stream};

/// Runs the original protocol with Bell-pair checking on every hop.
pub fn run_original(
    x: &SecretInput,
    y: &SecretInput,
    config: &ProtocolConfig,
    seed: u64,
    adversary: &mut dyn Adversary,
) -> Result<RunReport, Error> {
    run(ProtocolKind::Original, x, y, config, seed, adversary)
}

/// Runs the repaired protocol with decoy-photon checking.
pub fn run_improved(
    x: &SecretInput,
    y: &SecretInput,
    config: &ProtocolConfig,
    seed: u64,
    adversary: &mut dyn Adversary,
) -> Result<RunReport, Error> {
    run(ProtocolKind::Improved, x, y, config, seed, adversary)
}

pub fn run(
    kind: ProtocolKind,
    x: &SecretInput,
    y: &SecretInput,
    config: &ProtocolConfig,
    seed: u64,
    adversary: &mut dyn Adversary,
) -> Result<RunReport, Error> {
    config.validate()?;
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!("secret lengths differ: {} vs {} bits", x.len(), y.len())));
    }
    Run::new(kind, x, y, config, seed, adversary).execute()
}

/// TP's aggregate: R = Σ_j popcount(R_j ⊕ R^C_j).
pub fn aggregate_r(combined: &[u8], tp_values: &[u8]) -> Result<u32, Error> {
    if combined.len() != tp_values.len() {
        return Err(Error::InvalidArgument(format!(
            "{} combined values but {} third-party values",
            combined.len(),
            tp_values.len()
        )));
    }
    Ok(combined.iter().zip(tp_values).map(|(r, c)| ((r ^ c) & 0b11).count_ones()).sum())
}

enum Halt {
    Abort,
    Fail(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fail(e)
    }
}

impl From<QuantumError> for Halt {
    fn from(e: QuantumError) -> Self {
        Halt::Fail(e.into())
    }
}

type Step<T = ()> = Result<T, Halt>;

struct Run<'a> {
    kind: ProtocolKind,
    x: &'a SecretInput,
    y: &'a SecretInput,
    config: &'a ProtocolConfig,
    groups: usize,
    checks: usize,
    register: Register,
    alice_rng: ChaCha8Rng,
    bob_rng: ChaCha8Rng,
    tp_rng: ChaCha8Rng,
    adversary_rng: ChaCha8Rng,
    adversary: &'a mut dyn Adversary,
    transcript: Transcript,
    alice: PartyState,
    bob: PartyState,
    tp: PartyState,
    counts: ParticleCounts,
    records: Vec<CheckRecord>,
    alice_decoys: Option<Vec<DecoyPhoton>>,
}

impl<'a> Run<'a> {
    fn new(
        kind: ProtocolKind,
        x: &'a SecretInput,
        y: &'a SecretInput,
        config: &'a ProtocolConfig,
        seed: u64,
        adversary: &'a mut dyn Adversary,
    ) -> Self {
        let groups = x.group_count();
        let mut register = Register::new(config.engine, derive_seed(seed, Stream::Nature, 0));
        if config.record_measurements {
            register = register.with_log();
        }
        Self {
            kind,
            x,
            y,
            config,
            groups,
            checks: config.checks_for(groups),
            register,
            alice_rng: stream_rng(seed, Stream::Alice),
            bob_rng: stream_rng(seed, Stream::Bob),
            tp_rng: stream_rng(seed, Stream::Tp),
            adversary_rng: stream_rng(seed, Stream::Adversary),
            adversary,
            transcript: Transcript::default(),
            alice: PartyState::new(Party::Alice, groups),
            bob: PartyState::new(Party::Bob, groups),
            tp: PartyState::new(Party::Tp, groups),
            counts: ParticleCounts::default(),
            records: Vec::new(),
            alice_decoys: None,
        }
    }

    fn execute(mut self) -> Result<RunReport, Error> {
        let outcome = self.steps();
        let r = match outcome {
            Ok(r) => Some(r),
            Err(Halt::Abort) => None,
            Err(Halt::Fail(e)) => return Err(e),
        };
        let verdict = match r {
            None => Verdict::Aborted,
            Some(0) => Verdict::Equal,
            Some(_) => Verdict::NotEqual,
        };
        let attack = self.adversary.claims(&mut self.adversary_rng).map(|claims| {
            AttackReport::evaluate(self.adversary.name(), claims, self.x, self.y, &self.bob.outcomes, r.is_none())
        });
        Ok(RunReport {
            protocol: self.kind,
            verdict,
            r,
            secret_bits: self.x.len(),
            groups: self.groups,
            detection_events: self.records.iter().filter(|c| !c.passed).cloned().collect(),
            checks: self.records,
            particle_counts: self.counts,
            transcript: self.transcript,
            parties: vec![self.alice, self.bob, self.tp],
            attack,
            measurement_log: self.register.take_log(),
        })
    }

    fn steps(&mut self) -> Step<u32> {
        self.prepare_message_pairs();
        match self.kind {
            ProtocolKind::Original => self.original_first_exchange()?,
            ProtocolKind::Improved => self.improved_first_exchange()?,
        }
        let tp_received = match self.kind {
            ProtocolKind::Original => "S_A2",
            ProtocolKind::Improved => "S_A2*",
        };
        let holdings = TpHoldings {
            protocol: self.kind,
            own_first: self.tp.sequence("S_C1"),
            received: self.tp.sequence(tp_received),
            positions_known: self.kind == ProtocolKind::Original,
        };
        self.adversary.tp_before_alice_measures(&holdings, &mut self.register, &mut self.adversary_rng)?;
        self.alice_measures()?;
        match self.kind {
            ProtocolKind::Original => self.original_second_exchange()?,
            ProtocolKind::Improved => self.improved_second_exchange()?,
        }
        match self.config.final_order {
            FinalOrder::BobFirst => {
                self.bob_measures()?;
                self.tp_measures()?;
            }
            FinalOrder::TpFirst => {
                self.tp_measures()?;
                self.bob_measures()?;
            }
        }
        Ok(self.compare())
    }

    /// Every party prepares ⌈L/2⌉ |Φ+⟩ pairs and splits them into two sequences.
    fn prepare_message_pairs(&mut self) {
        for (party, first, second) in
            [(Party::Alice, "S_A1", "S_A2"), (Party::Bob, "S_B1", "S_B2"), (Party::Tp, "S_C1", "S_C2")]
        {
            let (s1, s2): (Vec<QubitId>, Vec<QubitId>) =
                (0..self.groups).map(|_| self.register.prepare_bell(BellLabel::PhiPlus)).unzip();
            self.counts.message += 2 * self.groups;
            let state = self.party_mut(party);
            state.hold(first, s1);
            state.hold(second, s2);
        }
    }

    fn original_first_exchange(&mut self) -> Step {
        let (a_pos, a_first, a_second) = self.embed_pairs(Party::Alice, "S_A1", "S_A2");
        let (c_pos, c_first, c_second) = self.embed_pairs(Party::Tp, "S_C1", "S_C2");

        self.transmit(Channel::AliceToTp, &a_second)?;
        self.transmit(Channel::TpToAlice, &c_second)?;

        self.pair_check(CheckScope::AliceToTp, Party::Alice, Party::Tp, &a_first, &a_second, &a_pos)?;
        self.pair_check(CheckScope::TpToAlice, Party::Tp, Party::Alice, &c_first, &c_second, &c_pos)?;

        self.alice.hold("S_A1", extract(&a_first, &a_pos).0);
        self.alice.hold("S_C2", extract(&c_second, &c_pos).0);
        self.tp.hold("S_C1", extract(&c_first, &c_pos).0);
        self.tp.hold("S_A2", extract(&a_second, &a_pos).0);
        Ok(())
    }

    fn original_second_exchange(&mut self) -> Step {
        let (b_pos, b_first, b_second) = self.embed_pairs(Party::Bob, "S_B1", "S_B2");
        let (c_pos, c_first, c_second) = self.embed_pairs(Party::Tp, "S_C1", "S_A2");

        self.transmit(Channel::BobToTp, &b_second)?;
        self.transmit(Channel::TpToBob, &c_second)?;

        self.pair_check(CheckScope::BobToTp, Party::Bob, Party::Tp, &b_first, &b_second, &b_pos)?;
        self.pair_check(CheckScope::TpToBob, Party::Tp, Party::Bob, &c_first, &c_second, &c_pos)?;

        self.bob.hold("S_B1", extract(&b_first, &b_pos).0);
        self.bob.hold("S_A2", extract(&c_second, &c_pos).0);
        self.tp.hold("S_C1", extract(&c_first, &c_pos).0);
        self.tp.hold("S_B2", extract(&b_second, &b_pos).0);
        Ok(())
    }

    fn improved_first_exchange(&mut self) -> Step {
        let (a_decoys, a_seq) = self.embed_decoys(Party::Alice, "S_A2");
        let (c_decoys, c_seq) = self.embed_decoys(Party::Tp, "S_C2");

        self.transmit(Channel::AliceToTp, &a_seq)?;
        self.transmit(Channel::TpToAlice, &c_seq)?;

        self.decoy_check(CheckScope::TpToAlice, Party::Tp, Party::Alice, &c_decoys, &c_seq)?;
        let c_pos: Vec<usize> = c_decoys.iter().map(|d| d.position).collect();
        self.alice.hold("S_C2", extract(&c_seq, &c_pos).0);
        // Alice keeps her decoy layout private; the third party holds the
        // starred sequence untouched until it forwards it to Bob.
        self.tp.hold("S_A2*", a_seq);
        self.alice_decoys = Some(a_decoys);
        Ok(())
    }

    fn improved_second_exchange(&mut self) -> Step {
        let (b_decoys, b_seq) = self.embed_decoys(Party::Bob, "S_B2");
        self.transmit(Channel::BobToTp, &b_seq)?;
        self.decoy_check(CheckScope::BobToTp, Party::Bob, Party::Tp, &b_decoys, &b_seq)?;
        let b_pos: Vec<usize> = b_decoys.iter().map(|d| d.position).collect();
        self.tp.hold("S_B2", extract(&b_seq, &b_pos).0);

        let a_seq = self.tp.release("S_A2*");
        self.transmit(Channel::TpToBob, &a_seq)?;
        let a_decoys = self.alice_decoys.take().expect("prepared in the first exchange");
        self.decoy_check(CheckScope::AliceTpBob, Party::Alice, Party::Bob, &a_decoys, &a_seq)?;
        let a_pos: Vec<usize> = a_decoys.iter().map(|d| d.position).collect();
        self.bob.hold("S_A2", extract(&a_seq, &a_pos).0);
        Ok(())
    }

    fn alice_measures(&mut self) -> Step {
        let a1 = self.alice.release("S_A1");
        let c2 = self.alice.release("S_C2");
        for (j, (p, q)) in a1.iter().zip(&c2).enumerate() {
            let label = self.register.bell_measure(*p, *q)?;
            self.alice.record(j, label);
        }
        self.alice.hold("S_A1", a1);
        self.alice.hold("S_C2", c2);
        Ok(())
    }

    fn bob_measures(&mut self) -> Step {
        let b1 = self.bob.sequence("S_B1").to_vec();
        let a2 = self.bob.sequence("S_A2").to_vec();
        for (j, (p, q)) in b1.iter().zip(&a2).enumerate() {
            let label = self.register.bell_measure(*p, *q)?;
            self.bob.record(j, label);
        }
        Ok(())
    }

    fn tp_measures(&mut self) -> Step {
        let c1 = self.tp.sequence("S_C1").to_vec();
        let b2 = self.tp.sequence("S_B2").to_vec();
        for (j, (p, q)) in c1.iter().zip(&b2).enumerate() {
            let label = self.register.bell_measure(*p, *q)?;
            self.tp.record(j, label);
            self.adversary.tp_outcome(j, label);
        }
        Ok(())
    }

    /// Publishes E^A_j, E^B_j and R_j; the third party aggregates and
    /// announces R.
    fn compare(&mut self) -> u32 {
        let ra = self.alice.r_values().expect("Alice measured every group");
        let rb = self.bob.r_values().expect("Bob measured every group");
        let rc = self.tp.r_values().expect("TP measured every group");
        let ea: Vec<u8> = ra.iter().zip(self.x.groups()).map(|(r, g)| r ^ g).collect();
        let eb: Vec<u8> = rb.iter().zip(self.y.groups()).map(|(r, g)| r ^ g).collect();
        for (group, value) in ea.iter().enumerate() {
            self.publish(Party::Alice, Message::Encrypted { group, value: *value });
        }
        for (group, value) in eb.iter().enumerate() {
            self.publish(Party::Bob, Message::Encrypted { group, value: *value });
        }
        let combined: Vec<u8> = ea.iter().zip(&eb).map(|(a, b)| a ^ b).collect();
        for (group, value) in combined.iter().enumerate() {
            self.publish(Party::Alice, Message::Combined { group, value: *value });
        }
        let r = aggregate_r(&combined, &rc).expect("one value per group on both sides");
        self.publish(Party::Tp, Message::Comparison { r });
        r
    }

    /// Hides L′ fresh |Φ+⟩ pairs inside two of `party`'s sequences at the
    /// same random positions. Returns (positions, first, second).
    fn embed_pairs(&mut self, party: Party, first: &str, second: &str) -> (Vec<usize>, Vec<QubitId>, Vec<QubitId>) {
        let pairs = prepare_checking_pairs(self.checks, &mut self.register);
        self.counts.checking += 2 * self.checks;
        let total = self.groups + self.checks;
        let positions = random_positions(total, self.checks, self.party_rng(party));
        let (firsts, seconds): (Vec<QubitId>, Vec<QubitId>) = pairs.into_iter().unzip();
        let state = self.party_mut(party);
        let s1 = interleave(&state.release(first), &firsts, &positions);
        let s2 = interleave(&state.release(second), &seconds, &positions);
        (positions, s1, s2)
    }

    /// Hides L′ fresh decoys inside `party`'s sequence `name`.
    fn embed_decoys(&mut self, party: Party, name: &str) -> (Vec<DecoyPhoton>, Vec<QubitId>) {
        let checks = self.checks;
        let total = self.groups + checks;
        let rng = match party {
            Party::Alice => &mut self.alice_rng,
            Party::Bob => &mut self.bob_rng,
            Party::Tp => &mut self.tp_rng,
        };
        let (mut decoys, qubits) = prepare_decoys(checks, &mut self.register, rng);
        let positions = random_positions(total, checks, rng);
        for (d, p) in decoys.iter_mut().zip(&positions) {
            d.position = *p;
        }
        self.counts.checking += checks;
        let message = self.party_mut(party).release(name);
        (decoys, interleave(&message, &qubits, &positions))
    }

    fn pair_check(
        &mut self,
        scope: CheckScope,
        owner: Party,
        receiver: Party,
        first_seq: &[QubitId],
        second_seq: &[QubitId],
        positions: &[usize],
    ) -> Step {
        self.publish(owner, Message::CheckPositions { check: scope, positions: positions.to_vec() });
        let bases = random_bases(positions.len(), self.party_rng(owner));
        self.publish(owner, Message::CheckBases { check: scope, bases: bases.clone() });
        let first: Vec<QubitId> = positions.iter().map(|p| first_seq[*p]).collect();
        let second: Vec<QubitId> = positions.iter().map(|p| second_seq[*p]).collect();
        let (a, b) = measure_pair_halves(&mut self.register, &first, &second, &bases)?;
        self.publish(owner, Message::CheckOutcomes { check: scope, outcomes: a.clone() });
        self.publish(receiver, Message::CheckOutcomes { check: scope, outcomes: b.clone() });
        self.conclude_check(scope, owner, tally_pairs(&a, &b))
    }

    fn decoy_check(
        &mut self,
        scope: CheckScope,
        owner: Party,
        measurer: Party,
        decoys: &[DecoyPhoton],
        sequence: &[QubitId],
    ) -> Step {
        let positions: Vec<usize> = decoys.iter().map(|d| d.position).collect();
        self.publish(owner, Message::CheckPositions { check: scope, positions: positions.clone() });
        self.publish(owner, Message::CheckBases { check: scope, bases: decoys.iter().map(|d| d.basis).collect() });
        let received: Vec<QubitId> = positions.iter().map(|p| sequence[*p]).collect();
        let outcomes = measure_decoys(&mut self.register, decoys, &received)?;
        self.publish(measurer, Message::CheckOutcomes { check: scope, outcomes: outcomes.clone() });
        self.conclude_check(scope, owner, tally_decoys(decoys, &outcomes))
    }

    fn conclude_check(&mut self, scope: CheckScope, analyst: Party, tally: CheckTally) -> Step {
        let error_rate = tally.error_rate();
        let passed = error_rate <= self.config.threshold;
        self.records.push(CheckRecord {
            check: scope,
            checked: tally.checked,
            errors: tally.errors,
            error_rate,
            passed,
        });
        self.publish(
            analyst,
            Message::CheckResult { check: scope, checked: tally.checked, errors: tally.errors, error_rate, passed },
        );
        if passed {
            Ok(())
        } else {
            self.publish(analyst, Message::Abort { check: scope });
            Err(Halt::Abort)
        }
    }

    fn transmit(&mut self, channel: Channel, flight: &[QubitId]) -> Step {
        self.adversary.on_quantum(channel, flight, &mut self.register, &mut self.adversary_rng)?;
        Ok(())
    }

    fn publish(&mut self, from: Party, body: Message) {
        let message = self.transcript.push(PublicMessage { from, body });
        self.adversary.on_public(message);
    }

    fn party_mut(&mut self, party: Party) -> &mut PartyState {
        match party {
            Party::Alice => &mut self.alice,
            Party::Bob => &mut self.bob,
            Party::Tp => &mut self.tp,
        }
    }

    fn party_rng(&mut self, party: Party) -> &mut ChaCha8Rng {
        match party {
            Party::Alice => &mut self.alice_rng,
            Party::Bob => &mut self.bob_rng,
            Party::Tp => &mut self.tp_rng,
        }
    }
}
