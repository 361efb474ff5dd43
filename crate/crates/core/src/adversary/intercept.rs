use rand::{Rng, RngCore};

use crate::protocol::{Adversary, Channel};
use crate::quantum::{Basis, QuantumError, QubitId, Register};

/// Measures every particle of `flight` in a uniformly random Z or X basis.
/// The measured particle, now in the eigenstate of its outcome, is what the
/// receiver gets. Returns the basis and outcome per particle.
pub fn intercept_resend<R: Rng + ?Sized>(
    flight: &[QubitId],
    register: &mut Register,
    rng: &mut R,
) -> Result<Vec<(Basis, u8)>, QuantumError> {
    flight
        .iter()
        .map(|q| {
            let basis = if rng.random_bool(0.5) { Basis::X } else { Basis::Z };
            register.single_measure(*q, basis).map(|bit| (basis, bit))
        })
        .collect()
}

/// External eavesdropper running [`intercept_resend`] on one channel.
#[derive(Debug, Clone)]
pub struct InterceptResend {
    channel: Channel,
    intercepted: usize,
}

impl InterceptResend {
    pub fn new(channel: Channel) -> Self {
        Self { channel, intercepted: 0 }
    }

    pub fn intercepted(&self) -> usize {
        self.intercepted
    }
}

impl Adversary for InterceptResend {
    fn name(&self) -> &'static str {
        "intercept-resend"
    }

    fn on_quantum(
        &mut self,
        channel: Channel,
        flight: &[QubitId],
        register: &mut Register,
        rng: &mut dyn RngCore,
    ) -> Result<(), QuantumError> {
        if channel == self.channel {
            intercept_resend(flight, register, rng)?;
            self.intercepted += flight.len();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Engine;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_flight_is_untouched() {
        let mut reg = Register::new(Engine::Symbolic, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(intercept_resend(&[], &mut reg, &mut rng).unwrap().is_empty());
        assert_eq!(reg.qubit_count(), 0);
    }

    #[test]
    fn forwarded_particle_is_the_measured_eigenstate() {
        let mut reg = Register::new(Engine::Dense, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = reg.prepare_photon(Basis::X, 0);
        let (basis, bit) = intercept_resend(&[q], &mut reg, &mut rng).unwrap()[0];
        let d = reg.single_distribution(q, basis).unwrap();
        assert!((d[bit as usize] - 1.0).abs() < 1e-12);
    }
}
