//! Particle efficiency η = η_s / η_q: compared secret bits over every
//! particle prepared, checking particles included.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::protocol::{group_count, ProtocolKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfficiencyBreakdown {
    pub protocol: ProtocolKind,
    /// η_s: raw secret length L (padding bits are not counted).
    pub eta_s: u64,
    /// η_q: message plus checking particles.
    pub eta_q: u64,
    pub message_particles: u64,
    pub checking_particles: u64,
    pub eta: Ratio<u64>,
}

impl EfficiencyBreakdown {
    pub fn eta_f64(&self) -> f64 {
        *self.eta.numer() as f64 / *self.eta.denom() as f64
    }
}

impl Serialize for EfficiencyBreakdown {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            protocol: ProtocolKind,
            eta_s: u64,
            eta_q: u64,
            message_particles: u64,
            checking_particles: u64,
            eta: f64,
            eta_exact: String,
        }
        Repr {
            protocol: self.protocol,
            eta_s: self.eta_s,
            eta_q: self.eta_q,
            message_particles: self.message_particles,
            checking_particles: self.checking_particles,
            eta: self.eta_f64(),
            eta_exact: format!("{}/{}", self.eta.numer(), self.eta.denom()),
        }
        .serialize(serializer)
    }
}

/// Efficiency with L′ = ⌈L/2⌉ checking units.
pub fn particle_efficiency(protocol: ProtocolKind, len: usize) -> Result<EfficiencyBreakdown, Error> {
    particle_efficiency_with_checks(protocol, len, group_count(len))
}

/// Efficiency with an explicit L′.
///
/// Message particles are three Bell pairs per group in both protocols. The
/// original protocol spends four checking pairs per unit of L′ (one per hop
/// in each direction, twice), the repaired one three decoys.
pub fn particle_efficiency_with_checks(
    protocol: ProtocolKind,
    len: usize,
    checks: usize,
) -> Result<EfficiencyBreakdown, Error> {
    if len < 1 {
        return Err(Error::InvalidArgument("secret length must be at least 1".into()));
    }
    let groups = group_count(len) as u64;
    let checks = checks as u64;
    let message_particles = 6 * groups;
    let checking_particles = match protocol {
        ProtocolKind::Original => 8 * checks,
        ProtocolKind::Improved => 3 * checks,
    };
    let eta_q = message_particles + checking_particles;
    Ok(EfficiencyBreakdown {
        protocol,
        eta_s: len as u64,
        eta_q,
        message_particles,
        checking_particles,
        eta: Ratio::new(len as u64, eta_q),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn original_is_one_seventh() {
        let b = particle_efficiency(ProtocolKind::Original, 100).unwrap();
        assert_eq!(b.eta, Ratio::new(1, 7));
        assert!((b.eta_f64() - 0.142857).abs() < 1e-6);
        let small = particle_efficiency(ProtocolKind::Original, 2).unwrap();
        assert_eq!((small.message_particles, small.checking_particles), (6, 8));
        assert_eq!(small.eta, Ratio::new(2, 14));
    }

    #[test]
    fn improved_is_two_ninths() {
        let b = particle_efficiency(ProtocolKind::Improved, 100).unwrap();
        assert_eq!((b.message_particles, b.checking_particles), (300, 150));
        assert_eq!(b.eta, Ratio::new(2, 9));
    }

    #[test]
    fn odd_length_uses_raw_bits() {
        let b = particle_efficiency(ProtocolKind::Original, 3).unwrap();
        assert_eq!(b.eta_q, 28);
        assert_eq!(b.eta, Ratio::new(3, 28));
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(particle_efficiency(ProtocolKind::Improved, 0).is_err());
    }
}
