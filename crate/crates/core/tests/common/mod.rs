//! A deliberately naive dense simulator, written from the textbook
//! definitions only, used as ground truth for the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;

pub const TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Bell vectors over |00>, |01>, |10>, |11> for codes 00 Φ+, 01 Φ−, 10 Ψ+, 11 Ψ−.
pub fn bell_vector(code: u8) -> [Complex64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match code {
        0b00 => [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)],
        0b01 => [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-h, 0.0)],
        0b10 => [c(0.0, 0.0), c(h, 0.0), c(h, 0.0), c(0.0, 0.0)],
        0b11 => [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)],
        _ => panic!("bad code"),
    }
}

/// Single-qubit eigenvectors: basis 0 is Z, 1 is X.
pub fn eigen_vector(basis: u8, bit: u8) -> [Complex64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match (basis, bit) {
        (0, 0) => [c(1.0, 0.0), c(0.0, 0.0)],
        (0, 1) => [c(0.0, 0.0), c(1.0, 0.0)],
        (1, 0) => [c(h, 0.0), c(h, 0.0)],
        (1, 1) => [c(h, 0.0), c(-h, 0.0)],
        _ => panic!("bad basis/bit"),
    }
}

/// Pure state on `n` qubits, qubit 0 the most significant bit. Measured
/// qubits stay in place (collapsed) so indices never shift.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl Oracle {
    pub fn product_of_bells(labels: &[u8]) -> Self {
        let mut amps = vec![c(1.0, 0.0)];
        for &l in labels {
            let v = bell_vector(l);
            amps = amps.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        }
        Self { n: 2 * labels.len(), amps }
    }

    pub fn from_amps(n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }

    fn bit(&self, index: usize, q: usize) -> usize {
        (index >> (self.n - 1 - q)) & 1
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Unnormalized projection of qubits (a, b) onto a Bell state.
    pub fn project_bell(&self, a: usize, b: usize, code: u8) -> Oracle {
        let v = bell_vector(code);
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (i, amp) in out.iter_mut().enumerate() {
            // <v| acts on (a, b); the result is written back on every
            // basis pattern of (a, b) weighted by |v>.
            let target = self.bit(i, a) * 2 + self.bit(i, b);
            let base = i & !(1 << (self.n - 1 - a)) & !(1 << (self.n - 1 - b));
            let mut overlap = c(0.0, 0.0);
            for (k, vk) in v.iter().enumerate() {
                let j = base | ((k >> 1) << (self.n - 1 - a)) | ((k & 1) << (self.n - 1 - b));
                overlap += vk.conj() * self.amps[j];
            }
            *amp = v[target] * overlap;
        }
        Oracle::from_amps(self.n, out)
    }

    pub fn project_single(&self, q: usize, basis: u8, bit: u8) -> Oracle {
        let v = eigen_vector(basis, bit);
        let mut out = vec![c(0.0, 0.0); self.amps.len()];
        for (i, amp) in out.iter_mut().enumerate() {
            let target = self.bit(i, q);
            let base = i & !(1 << (self.n - 1 - q));
            let overlap = v[0].conj() * self.amps[base] + v[1].conj() * self.amps[base | (1 << (self.n - 1 - q))];
            *amp = v[target] * overlap;
        }
        Oracle::from_amps(self.n, out)
    }

    pub fn normalized(mut self) -> Oracle {
        let n = self.norm().sqrt();
        for a in &mut self.amps {
            *a /= n;
        }
        self
    }

    /// Outcome distribution of a Bell measurement on (a, b).
    pub fn bell_distribution(&self, a: usize, b: usize) -> [f64; 4] {
        let total = self.norm();
        let mut d = [0.0; 4];
        for (code, p) in d.iter_mut().enumerate() {
            *p = self.project_bell(a, b, code as u8).norm() / total;
        }
        d
    }

    /// Joint distribution of a sequence of Bell measurements, by branching
    /// over every outcome.
    pub fn joint_bell(&self, pairs: &[(usize, usize)]) -> BTreeMap<Vec<u8>, f64> {
        let mut out = BTreeMap::new();
        self.branch(pairs, Vec::new(), &mut out);
        out
    }

    fn branch(&self, pairs: &[(usize, usize)], prefix: Vec<u8>, out: &mut BTreeMap<Vec<u8>, f64>) {
        let p = self.norm();
        if p < 1e-14 {
            return;
        }
        let Some((&(a, b), rest)) = pairs.split_first() else {
            out.insert(prefix, p);
            return;
        };
        for code in 0..4u8 {
            let mut next = prefix.clone();
            next.push(code);
            self.project_bell(a, b, code).branch(rest, next, out);
        }
    }
}

/// Per-photon error rate of random-basis intercept-resend on a decoy, by
/// enumeration over prepared state × eavesdropper basis × her outcome.
pub fn decoy_intercept_error() -> f64 {
    let mut err = 0.0;
    for basis in 0..2u8 {
        for bit in 0..2u8 {
            let prepared = eigen_vector(basis, bit);
            for eve in 0..2u8 {
                for eve_bit in 0..2u8 {
                    let resent = eigen_vector(eve, eve_bit);
                    let p_eve = overlap(&resent, &prepared);
                    let p_flip = overlap(&eigen_vector(basis, 1 - bit), &resent);
                    err += 0.25 * 0.5 * p_eve * p_flip;
                }
            }
        }
    }
    err
}

/// Per-pair error rate when the second half of |Φ+⟩ is intercepted and
/// resent, both halves then measured in a shared random basis.
pub fn pair_intercept_error() -> f64 {
    let pair = Oracle::product_of_bells(&[0]);
    let mut err = 0.0;
    for eve in 0..2u8 {
        for eve_bit in 0..2u8 {
            let after = pair.project_single(1, eve, eve_bit);
            for check in 0..2u8 {
                for a in 0..2u8 {
                    let b = 1 - a;
                    let p = after.project_single(0, check, a).project_single(1, check, b).norm();
                    err += 0.5 * 0.5 * p;
                }
            }
        }
    }
    err
}

fn overlap(u: &[Complex64; 2], v: &[Complex64; 2]) -> f64 {
    (u[0].conj() * v[0] + u[1].conj() * v[1]).norm_sqr()
}

/// Three-sigma binomial half-width.
pub fn three_sigma(p: f64, n: u64) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
