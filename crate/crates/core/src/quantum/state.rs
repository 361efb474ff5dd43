//! Dense pure-state vectors over a handful of qubits.
//!
//! Qubit 0 is the most significant bit of the amplitude index, so the
//! amplitude at index `0b01` of a 2-qubit state is the coefficient of |01⟩.
//! Collapsed states are returned with their first non-negligible amplitude
//! rotated to the positive real axis; two states are therefore comparable
//! with [`StateVector::approx_eq`] without worrying about global phase.

use num_complex::Complex64;
use rand::Rng;

use super::bell::{Basis, BellLabel};
use super::QuantumError;

/// Default upper bound on qubits held in a single dense vector.
pub const DEFAULT_QUBIT_CAP: usize = 8;

/// Amplitudes whose squared magnitude is below this are treated as zero when
/// sampling outcomes and fixing the global phase.
pub(crate) const PROB_EPS: f64 = 1e-12;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Amplitudes of a Bell state over |00⟩, |01⟩, |10⟩, |11⟩.
pub fn bell_amplitudes(label: BellLabel) -> [Complex64; 4] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    match label {
        BellLabel::PhiPlus => [h, z, z, h],
        BellLabel::PhiMinus => [h, z, z, -h],
        BellLabel::PsiPlus => [z, h, h, z],
        BellLabel::PsiMinus => [z, h, -h, z],
    }
}

/// Amplitudes of the single-qubit eigenstate `bit` of `basis` over |0⟩, |1⟩.
pub fn photon_amplitudes(basis: Basis, bit: u8) -> [Complex64; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    match (basis, bit & 1) {
        (Basis::Z, 0) => [one, zero],
        (Basis::Z, _) => [zero, one],
        (Basis::X, 0) => [h, h],
        (Basis::X, _) => [h, -h],
    }
}

/// Draws an index from `probs` with a single uniform sample.
///
/// Exactly one `f64` is drawn regardless of how peaked the distribution is,
/// so callers that agree on distributions consume identical randomness.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let total: f64 = probs.iter().filter(|p| **p > PROB_EPS).sum();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= PROB_EPS {
            continue;
        }
        last = i;
        acc += p / total;
        if u < acc {
            return i;
        }
    }
    last
}

impl StateVector {
    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self, QuantumError> {
        Self::check_cap(num_qubits, DEFAULT_QUBIT_CAP)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QuantumError::BadDimension(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        Self::check_cap(num_qubits, DEFAULT_QUBIT_CAP)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= PROB_EPS {
            return Err(QuantumError::ZeroVector);
        }
        Ok(Self { num_qubits, amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    pub fn bell(label: BellLabel) -> Self {
        Self { num_qubits: 2, amplitudes: bell_amplitudes(label).to_vec() }
    }

    /// Single-qubit eigenstate: (Z,0)→|0⟩, (Z,1)→|1⟩, (X,0)→|+⟩, (X,1)→|−⟩.
    pub fn photon(basis: Basis, bit: u8) -> Self {
        Self { num_qubits: 1, amplitudes: photon_amplitudes(basis, bit).to_vec() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Kronecker product with the default cap.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, QuantumError> {
        self.tensor_with_cap(other, DEFAULT_QUBIT_CAP)
    }

    /// Kronecker product; `other`'s qubits follow `self`'s.
    pub fn tensor_with_cap(&self, other: &StateVector, cap: usize) -> Result<StateVector, QuantumError> {
        let n = self.num_qubits + other.num_qubits;
        Self::check_cap(n, cap)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector { num_qubits: n, amplitudes })
    }

    /// Born probabilities of the four Bell outcomes on `pair`, in code order.
    pub fn outcome_distribution(&self, pair: (usize, usize)) -> Result<[f64; 4], QuantumError> {
        self.check_pair(pair)?;
        let mut probs = [0.0; 4];
        for label in BellLabel::ALL {
            probs[label.index()] = self.pair_overlaps(pair, &bell_amplitudes(label)).1;
        }
        Ok(probs)
    }

    /// Post-selects `pair` onto `label`. Returns the outcome probability and
    /// the normalized collapsed state, or `None` if the outcome is impossible.
    pub fn project_bell(
        &self,
        pair: (usize, usize),
        label: BellLabel,
    ) -> Result<Option<(f64, StateVector)>, QuantumError> {
        self.check_pair(pair)?;
        Ok(self.project_pair(pair, &bell_amplitudes(label)))
    }

    /// Projective Bell-basis measurement of `pair` with collapse.
    pub fn bell_measure<R: Rng + ?Sized>(
        &self,
        pair: (usize, usize),
        rng: &mut R,
    ) -> Result<(BellLabel, StateVector), QuantumError> {
        let probs = self.outcome_distribution(pair)?;
        let label = BellLabel::ALL[sample_index(&probs, rng)];
        let (_, post) =
            self.project_pair(pair, &bell_amplitudes(label)).expect("sampled outcome has non-zero probability");
        Ok((label, post))
    }

    /// Born probabilities of outcome bits 0 and 1 for `index` measured in `basis`.
    pub fn single_distribution(&self, index: usize, basis: Basis) -> Result<[f64; 2], QuantumError> {
        self.check_index(index)?;
        Ok([0u8, 1].map(|bit| self.qubit_overlaps(index, &photon_amplitudes(basis, bit)).1))
    }

    pub fn project_single(
        &self,
        index: usize,
        basis: Basis,
        bit: u8,
    ) -> Result<Option<(f64, StateVector)>, QuantumError> {
        self.check_index(index)?;
        Ok(self.project_qubit(index, &photon_amplitudes(basis, bit)))
    }

    /// Single-qubit measurement of `index` in `basis` with collapse.
    pub fn single_measure<R: Rng + ?Sized>(
        &self,
        index: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(u8, StateVector), QuantumError> {
        let probs = self.single_distribution(index, basis)?;
        let bit = sample_index(&probs, rng) as u8;
        let (_, post) = self
            .project_qubit(index, &photon_amplitudes(basis, bit))
            .expect("sampled outcome has non-zero probability");
        Ok((bit, post))
    }

    /// Removes `pair`, assumed to be in Bell state `label`, and returns the
    /// normalized state of the remaining qubits in their original order.
    /// Returns `None` when no qubits remain or the overlap vanishes.
    pub fn remove_pair(&self, pair: (usize, usize), label: BellLabel) -> Result<Option<StateVector>, QuantumError> {
        self.check_pair(pair)?;
        if self.num_qubits == 2 {
            return Ok(None);
        }
        let v = bell_amplitudes(label);
        let (pi, pj) = (self.bit_of(pair.0), self.bit_of(pair.1));
        let mut rest = Vec::with_capacity(1 << (self.num_qubits - 2));
        for base in 0..self.amplitudes.len() {
            if base & (pi | pj) != 0 {
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (ab, c) in v.iter().enumerate() {
                let k = base | if ab & 2 != 0 { pi } else { 0 } | if ab & 1 != 0 { pj } else { 0 };
                s += c.conj() * self.amplitudes[k];
            }
            rest.push(s);
        }
        Ok(Self::from_amplitudes(rest).ok().map(|s| s.with_canonical_phase()))
    }

    /// Removes qubit `index`, assumed to be in eigenstate `bit` of `basis`.
    pub fn remove_qubit(&self, index: usize, basis: Basis, bit: u8) -> Result<Option<StateVector>, QuantumError> {
        self.check_index(index)?;
        if self.num_qubits == 1 {
            return Ok(None);
        }
        let v = photon_amplitudes(basis, bit);
        let p = self.bit_of(index);
        let mut rest = Vec::with_capacity(1 << (self.num_qubits - 1));
        for base in 0..self.amplitudes.len() {
            if base & p != 0 {
                continue;
            }
            rest.push(v[0].conj() * self.amplitudes[base] + v[1].conj() * self.amplitudes[base | p]);
        }
        Ok(Self::from_amplitudes(rest).ok().map(|s| s.with_canonical_phase()))
    }

    /// Reorders qubits: qubit `k` of the result is qubit `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector, QuantumError> {
        if order.len() != self.num_qubits {
            return Err(QuantumError::BadPermutation);
        }
        let mut seen = vec![false; self.num_qubits];
        for &q in order {
            self.check_index(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(QuantumError::BadPermutation);
            }
        }
        let n = self.num_qubits;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (new_idx, amp) in amplitudes.iter_mut().enumerate() {
            let mut old_idx = 0;
            for (k, &q) in order.iter().enumerate() {
                if new_idx & (1 << (n - 1 - k)) != 0 {
                    old_idx |= 1 << (n - 1 - q);
                }
            }
            *amp = self.amplitudes[old_idx];
        }
        Ok(StateVector { num_qubits: n, amplitudes })
    }

    /// |⟨self|other⟩|², or 0 for mismatched sizes.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        if self.num_qubits != other.num_qubits {
            return 0.0;
        }
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    /// Equality up to global phase.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.num_qubits == other.num_qubits && (1.0 - self.fidelity(other)).abs() <= tol
    }

    /// Rotates the first non-negligible amplitude onto the positive real axis.
    pub fn with_canonical_phase(mut self) -> StateVector {
        if let Some(lead) = self.amplitudes.iter().find(|a| a.norm_sqr() > PROB_EPS).copied() {
            let phase = lead.conj() / lead.norm();
            for a in &mut self.amplitudes {
                *a *= phase;
            }
        }
        self
    }

    fn check_cap(n: usize, cap: usize) -> Result<(), QuantumError> {
        if n > cap {
            Err(QuantumError::CapacityExceeded { requested: n, cap })
        } else {
            Ok(())
        }
    }

    fn check_index(&self, index: usize) -> Result<(), QuantumError> {
        if index >= self.num_qubits {
            Err(QuantumError::QubitOutOfRange { index, num_qubits: self.num_qubits })
        } else {
            Ok(())
        }
    }

    fn check_pair(&self, (i, j): (usize, usize)) -> Result<(), QuantumError> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(QuantumError::DuplicateQubit(i));
        }
        Ok(())
    }

    fn bit_of(&self, index: usize) -> usize {
        1 << (self.num_qubits - 1 - index)
    }

    /// Overlaps ⟨v|ψ_rest⟩ for every assignment of the other qubits, and the
    /// total probability Σ|overlap|².
    fn pair_overlaps(&self, (i, j): (usize, usize), v: &[Complex64; 4]) -> (Vec<(usize, Complex64)>, f64) {
        let (pi, pj) = (self.bit_of(i), self.bit_of(j));
        let mut out = Vec::with_capacity(self.amplitudes.len() / 4);
        let mut prob = 0.0;
        for base in 0..self.amplitudes.len() {
            if base & (pi | pj) != 0 {
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (ab, c) in v.iter().enumerate() {
                let k = base | if ab & 2 != 0 { pi } else { 0 } | if ab & 1 != 0 { pj } else { 0 };
                s += c.conj() * self.amplitudes[k];
            }
            prob += s.norm_sqr();
            out.push((base, s));
        }
        (out, prob)
    }

    fn project_pair(&self, pair: (usize, usize), v: &[Complex64; 4]) -> Option<(f64, StateVector)> {
        let (overlaps, prob) = self.pair_overlaps(pair, v);
        if prob <= PROB_EPS {
            return None;
        }
        let (pi, pj) = (self.bit_of(pair.0), self.bit_of(pair.1));
        let scale = prob.sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (base, s) in overlaps {
            for (ab, c) in v.iter().enumerate() {
                let k = base | if ab & 2 != 0 { pi } else { 0 } | if ab & 1 != 0 { pj } else { 0 };
                amplitudes[k] = c * s / scale;
            }
        }
        let post = StateVector { num_qubits: self.num_qubits, amplitudes };
        Some((prob, post.with_canonical_phase()))
    }

    fn qubit_overlaps(&self, index: usize, v: &[Complex64; 2]) -> (Vec<(usize, Complex64)>, f64) {
        let p = self.bit_of(index);
        let mut out = Vec::with_capacity(self.amplitudes.len() / 2);
        let mut prob = 0.0;
        for base in 0..self.amplitudes.len() {
            if base & p != 0 {
                continue;
            }
            let s = v[0].conj() * self.amplitudes[base] + v[1].conj() * self.amplitudes[base | p];
            prob += s.norm_sqr();
            out.push((base, s));
        }
        (out, prob)
    }

    fn project_qubit(&self, index: usize, v: &[Complex64; 2]) -> Option<(f64, StateVector)> {
        let (overlaps, prob) = self.qubit_overlaps(index, v);
        if prob <= PROB_EPS {
            return None;
        }
        let p = self.bit_of(index);
        let scale = prob.sqrt();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (base, s) in overlaps {
            amplitudes[base] = v[0] * s / scale;
            amplitudes[base | p] = v[1] * s / scale;
        }
        let post = StateVector { num_qubits: self.num_qubits, amplitudes };
        Some((prob, post.with_canonical_phase()))
    }
}
