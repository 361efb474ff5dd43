//! A register of qubits split into independent subsystems.
//!
//! Every particle in a protocol run lives here under a [`QubitId`]. The
//! register keeps the joint state factorized: preparing a Bell pair or a
//! photon creates a new subsystem, a measurement that spans two subsystems
//! merges them, and every measurement factors the measured qubits back out
//! (a projective measurement leaves them in a product with the rest).
//!
//! Two engines share this bookkeeping:
//!
//! * [`Engine::Symbolic`] stores Bell pairs as labels and single photons as
//!   `(basis, bit)` eigenstates and applies the swap algebra directly. Only
//!   operations outside that algebra (a Bell measurement touching a lone
//!   photon, say) fall back to dense vectors, and the results are turned
//!   back into labels when they are recognisable.
//! * [`Engine::Dense`] keeps every subsystem as a [`StateVector`].
//!
//! Both engines compute the full outcome distribution first and sample it
//! with one uniform draw from the register's own stream, so two registers
//! seeded alike and driven through the same calls agree outcome for outcome
//! whenever their distributions agree.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bell::{Basis, BellLabel};
use super::state::{sample_index, StateVector, DEFAULT_QUBIT_CAP};
use super::QuantumError;

/// Fidelity slack when recognising a dense state as a label.
const RECOGNISE_TOL: f64 = 1e-9;

/// Handle for one particle held in a [`Register`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitId(pub u32);

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Symbolic,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementKind {
    Bell,
    Single(Basis),
}

/// One measurement as seen by the register: which qubits, the Born
/// distribution it sampled from, and the outcome index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub kind: MeasurementKind,
    pub qubits: Vec<QubitId>,
    pub distribution: Vec<f64>,
    pub outcome: u8,
}

#[derive(Debug, Clone)]
enum System {
    Pair { qubits: [QubitId; 2], label: BellLabel },
    Photon { qubit: QubitId, basis: Basis, bit: u8 },
    Dense { qubits: Vec<QubitId>, state: StateVector },
}

impl System {
    fn qubits(&self) -> Vec<QubitId> {
        match self {
            System::Pair { qubits, .. } => qubits.to_vec(),
            System::Photon { qubit, .. } => vec![*qubit],
            System::Dense { qubits, .. } => qubits.clone(),
        }
    }

    fn materialize(&self) -> (Vec<QubitId>, StateVector) {
        match self {
            System::Pair { qubits, label } => (qubits.to_vec(), StateVector::bell(*label)),
            System::Photon { qubit, basis, bit } => (vec![*qubit], StateVector::photon(*basis, *bit)),
            System::Dense { qubits, state } => (qubits.clone(), state.clone()),
        }
    }
}

enum BellPlan {
    SamePair { label: BellLabel },
    Swap { first: (QubitId, BellLabel), second: (QubitId, BellLabel) },
    Dense,
}

enum SinglePlan {
    Photon { basis: Basis, bit: u8 },
    PairHalf { partner: QubitId, label: BellLabel },
    Dense,
}

#[derive(Debug, Clone)]
pub struct Register {
    engine: Engine,
    cap: usize,
    systems: Vec<Option<System>>,
    location: Vec<usize>,
    rng: ChaCha8Rng,
    log: Option<Vec<MeasurementRecord>>,
}

impl Register {
    /// Creates an empty register whose Born-rule sampling is seeded by `seed`.
    pub fn new(engine: Engine, seed: u64) -> Self {
        Self {
            engine,
            cap: DEFAULT_QUBIT_CAP,
            systems: Vec::new(),
            location: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            log: None,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// Starts recording every measurement.
    pub fn with_log(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn take_log(&mut self) -> Option<Vec<MeasurementRecord>> {
        self.log.take()
    }

    /// Number of particles ever prepared.
    pub fn qubit_count(&self) -> usize {
        self.location.len()
    }

    pub fn prepare_bell(&mut self, label: BellLabel) -> (QubitId, QubitId) {
        let a = self.fresh_id();
        let b = self.fresh_id();
        let system = match self.engine {
            Engine::Symbolic => System::Pair { qubits: [a, b], label },
            Engine::Dense => System::Dense { qubits: vec![a, b], state: StateVector::bell(label) },
        };
        self.install(system);
        (a, b)
    }

    pub fn prepare_photon(&mut self, basis: Basis, bit: u8) -> QubitId {
        let q = self.fresh_id();
        let system = match self.engine {
            Engine::Symbolic => System::Photon { qubit: q, basis, bit: bit & 1 },
            Engine::Dense => System::Dense { qubits: vec![q], state: StateVector::photon(basis, bit) },
        };
        self.install(system);
        q
    }

    /// Born probabilities of a Bell measurement on `(x, y)`, in code order.
    pub fn bell_distribution(&self, x: QubitId, y: QubitId) -> Result<[f64; 4], QuantumError> {
        let plan = self.plan_bell(x, y)?;
        self.bell_distribution_for(&plan, x, y)
    }

    /// Born probabilities of measuring `q` in `basis`.
    pub fn single_distribution(&self, q: QubitId, basis: Basis) -> Result<[f64; 2], QuantumError> {
        let plan = self.plan_single(q, basis)?;
        self.single_distribution_for(&plan, q, basis)
    }

    /// Bell-basis measurement of `(x, y)` with collapse.
    pub fn bell_measure(&mut self, x: QubitId, y: QubitId) -> Result<BellLabel, QuantumError> {
        let plan = self.plan_bell(x, y)?;
        let distribution = self.bell_distribution_for(&plan, x, y)?;
        let label = BellLabel::ALL[sample_index(&distribution, &mut self.rng)];
        match plan {
            BellPlan::SamePair { .. } => {}
            BellPlan::Swap { first, second } => {
                self.replace_systems(
                    &[x, y],
                    vec![
                        System::Pair { qubits: [x, y], label },
                        System::Pair { qubits: [first.0, second.0], label: label.compose(first.1).compose(second.1) },
                    ],
                );
            }
            BellPlan::Dense => {
                let (qubits, state) = self.merged_view(&[x, y])?;
                let pos = (index_in(&qubits, x), index_in(&qubits, y));
                let (_, post) = state.project_bell(pos, label)?.expect("sampled outcome has non-zero probability");
                let mut pieces = vec![self.recognise(vec![x, y], StateVector::bell(label))];
                if let Some(rest) = post.remove_pair(pos, label)? {
                    let rest_qubits = qubits.iter().copied().filter(|q| *q != x && *q != y).collect();
                    pieces.push(self.recognise(rest_qubits, rest));
                }
                self.replace_systems(&[x, y], pieces);
            }
        }
        self.record(MeasurementKind::Bell, vec![x, y], distribution.to_vec(), label.code());
        Ok(label)
    }

    /// Measures `q` in `basis` with collapse; returns the outcome bit.
    pub fn single_measure(&mut self, q: QubitId, basis: Basis) -> Result<u8, QuantumError> {
        let plan = self.plan_single(q, basis)?;
        let distribution = self.single_distribution_for(&plan, q, basis)?;
        let bit = sample_index(&distribution, &mut self.rng) as u8;
        match plan {
            SinglePlan::Photon { .. } => {
                self.replace_systems(&[q], vec![System::Photon { qubit: q, basis, bit }]);
            }
            SinglePlan::PairHalf { partner, label } => {
                let flip = match basis {
                    Basis::Z => label.flips_z(),
                    Basis::X => label.flips_x(),
                } as u8;
                self.replace_systems(
                    &[q],
                    vec![
                        System::Photon { qubit: q, basis, bit },
                        System::Photon { qubit: partner, basis, bit: bit ^ flip },
                    ],
                );
            }
            SinglePlan::Dense => {
                let (qubits, state) = self.merged_view(&[q])?;
                let pos = index_in(&qubits, q);
                let (_, post) =
                    state.project_single(pos, basis, bit)?.expect("sampled outcome has non-zero probability");
                let mut pieces = vec![self.recognise(vec![q], StateVector::photon(basis, bit))];
                if let Some(rest) = post.remove_qubit(pos, basis, bit)? {
                    let rest_qubits = qubits.iter().copied().filter(|r| *r != q).collect();
                    pieces.push(self.recognise(rest_qubits, rest));
                }
                self.replace_systems(&[q], pieces);
            }
        }
        self.record(MeasurementKind::Single(basis), vec![q], distribution.to_vec(), bit);
        Ok(bit)
    }

    /// Dense state of `qubits`, in that order. The qubits must make up whole
    /// subsystems (no entanglement with anything outside the list).
    pub fn snapshot(&self, qubits: &[QubitId]) -> Result<StateVector, QuantumError> {
        let (order, state) = self.merged_view(qubits)?;
        if order.len() != qubits.len() {
            return Err(QuantumError::NotSeparable);
        }
        let perm: Vec<usize> = qubits.iter().map(|q| index_in(&order, *q)).collect();
        state.permute(&perm)
    }

    /// Qubits sharing a subsystem with `q`, including `q`.
    pub fn entangled_with(&self, q: QubitId) -> Result<Vec<QubitId>, QuantumError> {
        let slot = self.slot(q)?;
        Ok(self.systems[slot].as_ref().expect("live slot").qubits())
    }

    fn fresh_id(&mut self) -> QubitId {
        let id = QubitId(self.location.len() as u32);
        self.location.push(usize::MAX);
        id
    }

    fn install(&mut self, system: System) {
        let slot = self.systems.len();
        for q in system.qubits() {
            self.location[q.0 as usize] = slot;
        }
        self.systems.push(Some(system));
    }

    fn slot(&self, q: QubitId) -> Result<usize, QuantumError> {
        self.location.get(q.0 as usize).copied().ok_or(QuantumError::UnknownQubit(q.0))
    }

    fn system(&self, q: QubitId) -> Result<&System, QuantumError> {
        let slot = self.slot(q)?;
        Ok(self.systems[slot].as_ref().expect("live slot"))
    }

    /// Removes every subsystem touching `qubits` and installs `pieces`.
    fn replace_systems(&mut self, qubits: &[QubitId], pieces: Vec<System>) {
        for q in qubits {
            let slot = self.location[q.0 as usize];
            self.systems[slot] = None;
        }
        for piece in pieces {
            self.install(piece);
        }
    }

    fn distinct_slots(&self, qubits: &[QubitId]) -> Result<Vec<usize>, QuantumError> {
        let mut slots = Vec::new();
        for q in qubits {
            let s = self.slot(*q)?;
            if !slots.contains(&s) {
                slots.push(s);
            }
        }
        Ok(slots)
    }

    /// Dense joint state of every subsystem touching `qubits`.
    fn merged_view(&self, qubits: &[QubitId]) -> Result<(Vec<QubitId>, StateVector), QuantumError> {
        let mut order = Vec::new();
        let mut state: Option<StateVector> = None;
        for slot in self.distinct_slots(qubits)? {
            let (qs, s) = self.systems[slot].as_ref().expect("live slot").materialize();
            order.extend(qs);
            state = Some(match state {
                None => s,
                Some(acc) => acc.tensor_with_cap(&s, self.cap)?,
            });
        }
        Ok((order, state.expect("at least one qubit")))
    }

    fn plan_bell(&self, x: QubitId, y: QubitId) -> Result<BellPlan, QuantumError> {
        if x == y {
            return Err(QuantumError::DuplicateQubit(x.0 as usize));
        }
        let (sx, sy) = (self.system(x)?, self.system(y)?);
        if self.engine == Engine::Dense {
            return Ok(BellPlan::Dense);
        }
        Ok(match (sx, sy) {
            (System::Pair { qubits, label }, System::Pair { .. }) if qubits.contains(&y) => {
                BellPlan::SamePair { label: *label }
            }
            (System::Pair { qubits: qx, label: lx }, System::Pair { qubits: qy, label: ly }) => {
                BellPlan::Swap { first: (partner_of(qx, x), *lx), second: (partner_of(qy, y), *ly) }
            }
            _ => BellPlan::Dense,
        })
    }

    fn plan_single(&self, q: QubitId, _basis: Basis) -> Result<SinglePlan, QuantumError> {
        let s = self.system(q)?;
        if self.engine == Engine::Dense {
            return Ok(SinglePlan::Dense);
        }
        Ok(match s {
            System::Photon { basis, bit, .. } => SinglePlan::Photon { basis: *basis, bit: *bit },
            System::Pair { qubits, label } => SinglePlan::PairHalf { partner: partner_of(qubits, q), label: *label },
            System::Dense { .. } => SinglePlan::Dense,
        })
    }

    fn bell_distribution_for(&self, plan: &BellPlan, x: QubitId, y: QubitId) -> Result<[f64; 4], QuantumError> {
        Ok(match plan {
            BellPlan::SamePair { label } => {
                let mut d = [0.0; 4];
                d[label.index()] = 1.0;
                d
            }
            BellPlan::Swap { .. } => [0.25; 4],
            BellPlan::Dense => {
                let (qubits, state) = self.merged_view(&[x, y])?;
                state.outcome_distribution((index_in(&qubits, x), index_in(&qubits, y)))?
            }
        })
    }

    fn single_distribution_for(&self, plan: &SinglePlan, q: QubitId, basis: Basis) -> Result<[f64; 2], QuantumError> {
        Ok(match plan {
            SinglePlan::Photon { basis: b, bit } if *b == basis => {
                let mut d = [0.0; 2];
                d[*bit as usize] = 1.0;
                d
            }
            SinglePlan::Photon { .. } | SinglePlan::PairHalf { .. } => [0.5; 2],
            SinglePlan::Dense => {
                let (qubits, state) = self.merged_view(&[q])?;
                state.single_distribution(index_in(&qubits, q), basis)?
            }
        })
    }

    /// Wraps a dense piece, turning it back into a label where possible.
    fn recognise(&self, qubits: Vec<QubitId>, state: StateVector) -> System {
        if self.engine == Engine::Symbolic {
            match qubits.len() {
                1 => {
                    for basis in Basis::ALL {
                        for bit in 0..2 {
                            if state.approx_eq(&StateVector::photon(basis, bit), RECOGNISE_TOL) {
                                return System::Photon { qubit: qubits[0], basis, bit };
                            }
                        }
                    }
                }
                2 => {
                    for label in BellLabel::ALL {
                        if state.approx_eq(&StateVector::bell(label), RECOGNISE_TOL) {
                            return System::Pair { qubits: [qubits[0], qubits[1]], label };
                        }
                    }
                }
                _ => {}
            }
        }
        System::Dense { qubits, state }
    }

    fn record(&mut self, kind: MeasurementKind, qubits: Vec<QubitId>, distribution: Vec<f64>, outcome: u8) {
        if let Some(log) = self.log.as_mut() {
            log.push(MeasurementRecord { kind, qubits, distribution, outcome });
        }
    }
}

fn partner_of(pair: &[QubitId; 2], q: QubitId) -> QubitId {
    if pair[0] == q {
        pair[1]
    } else {
        pair[0]
    }
}

fn index_in(qubits: &[QubitId], q: QubitId) -> usize {
    qubits.iter().position(|r| *r == q).expect("qubit in merged view")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn both_engines() -> [Register; 2] {
        [Register::new(Engine::Symbolic, 9), Register::new(Engine::Dense, 9)]
    }

    #[test]
    fn swap_correlation_in_both_engines() {
        for mut reg in both_engines() {
            for _ in 0..50 {
                let (a1, a2) = reg.prepare_bell(BellLabel::PhiPlus);
                let (c1, c2) = reg.prepare_bell(BellLabel::PhiPlus);
                let d = reg.bell_distribution(a1, c2).unwrap();
                assert!(d.iter().all(|p| (p - 0.25).abs() < TOL));
                let m = reg.bell_measure(a1, c2).unwrap();
                assert_eq!(reg.bell_measure(c1, a2).unwrap(), m);
                assert_eq!(reg.entangled_with(c1).unwrap().len(), 2);
            }
        }
    }

    #[test]
    fn every_symbolic_rule_matches_dense() {
        // Drive both engines through every two-system combination the
        // protocols can produce and compare distributions and states.
        type Prep = Box<dyn Fn(&mut Register) -> Vec<QubitId>>;
        let preps: Vec<Prep> = BellLabel::ALL
            .iter()
            .map(|&l| {
                Box::new(move |r: &mut Register| {
                    let (a, b) = r.prepare_bell(l);
                    vec![a, b]
                }) as Prep
            })
            .chain(Basis::ALL.iter().flat_map(|&basis| {
                (0..2u8).map(move |bit| Box::new(move |r: &mut Register| vec![r.prepare_photon(basis, bit)]) as Prep)
            }))
            .collect();
        for (i, p) in preps.iter().enumerate() {
            for (j, q) in preps.iter().enumerate() {
                for seed in 0..4 {
                    let mut sym = Register::new(Engine::Symbolic, seed);
                    let mut den = Register::new(Engine::Dense, seed);
                    let first = p(&mut sym);
                    let second = q(&mut sym);
                    assert_eq!(first, p(&mut den));
                    assert_eq!(second, q(&mut den));
                    let all: Vec<QubitId> = first.iter().chain(&second).copied().collect();
                    let (x, y) = (first[0], second[0]);
                    let ds = sym.bell_distribution(x, y).unwrap();
                    let dd = den.bell_distribution(x, y).unwrap();
                    for k in 0..4 {
                        assert!((ds[k] - dd[k]).abs() < TOL, "prep {i},{j}: {ds:?} vs {dd:?}");
                    }
                    assert_eq!(sym.bell_measure(x, y).unwrap(), den.bell_measure(x, y).unwrap());
                    for basis in Basis::ALL {
                        for &r in &all {
                            let a = sym.single_distribution(r, basis).unwrap();
                            let b = den.single_distribution(r, basis).unwrap();
                            assert!((a[0] - b[0]).abs() < TOL);
                        }
                    }
                    let s1 = sym.snapshot(&all).unwrap();
                    let s2 = den.snapshot(&all).unwrap();
                    assert!(s1.approx_eq(&s2, 1e-10), "prep {i},{j} seed {seed}");
                    for &r in &all {
                        let basis = if seed % 2 == 0 { Basis::Z } else { Basis::X };
                        assert_eq!(sym.single_measure(r, basis).unwrap(), den.single_measure(r, basis).unwrap());
                    }
                    assert!(sym.snapshot(&all).unwrap().approx_eq(&den.snapshot(&all).unwrap(), 1e-10));
                }
            }
        }
    }

    #[test]
    fn half_measurement_collapses_partner() {
        let mut reg = Register::new(Engine::Symbolic, 1);
        for label in BellLabel::ALL {
            for basis in Basis::ALL {
                let (a, b) = reg.prepare_bell(label);
                let bit = reg.single_measure(b, basis).unwrap();
                let other = reg.single_measure(a, basis).unwrap();
                let flip = if basis == Basis::Z { label.flips_z() } else { label.flips_x() };
                assert_eq!(bit ^ other, flip as u8, "{label} in {basis}");
            }
        }
    }

    #[test]
    fn unknown_and_duplicate_qubits() {
        let mut reg = Register::new(Engine::Symbolic, 0);
        let (a, _) = reg.prepare_bell(BellLabel::PhiPlus);
        assert_eq!(reg.bell_measure(a, a).unwrap_err(), QuantumError::DuplicateQubit(0));
        assert_eq!(reg.single_measure(QubitId(99), Basis::Z).unwrap_err(), QuantumError::UnknownQubit(99));
        assert_eq!(reg.snapshot(&[a]).unwrap_err(), QuantumError::NotSeparable);
    }

    #[test]
    fn log_records_measurements() {
        let mut reg = Register::new(Engine::Dense, 2).with_log();
        let (a, b) = reg.prepare_bell(BellLabel::PsiMinus);
        reg.bell_measure(a, b).unwrap();
        let log = reg.take_log().unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].outcome, BellLabel::PsiMinus.code());
        assert_eq!(log[0].kind, MeasurementKind::Bell);
    }
}
