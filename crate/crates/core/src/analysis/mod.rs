//! Efficiency accounting and seeded Monte Carlo aggregation.

mod efficiency;
mod montecarlo;
mod stats;

pub use efficiency::{particle_efficiency, particle_efficiency_with_checks, EfficiencyBreakdown};
pub use montecarlo::{monte_carlo, MonteCarloSummary, Scenario, SecretSource, Trial};
pub use stats::{
    binomial_half_width, chi_square_threshold, chi_square_uniform, independence_test, Estimate, IndependenceTest,
    SIGMAS,
};
