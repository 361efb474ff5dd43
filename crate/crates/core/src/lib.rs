//! Simulation and cryptanalysis of a three-party quantum private comparison
//! protocol built on Bell-state entanglement swapping.
//!
//! * [`quantum`] holds the state-vector kernel and the Bell-label algebra.
//! * [`protocol`] runs the original protocol (Bell-pair channel checks) and
//!   the repaired protocol (decoy-photon checks).
//! * [`adversary`] implements the third party's measurement attack, a guessing
//!   variant for the repaired protocol, and an intercept-resend eavesdropper.
//! * [`analysis`] counts particle efficiency and aggregates Monte Carlo trials.

pub mod adversary;
pub mod analysis;
pub mod error;
pub mod protocol;
pub mod quantum;
pub mod rng;

pub use error::Error;
