//! Binomial and chi-square helpers used as 3σ tolerances.

use serde::{Deserialize, Serialize};

/// Number of standard deviations used for every statistical tolerance.
pub const SIGMAS: f64 = 3.0;

/// A binomial proportion with its 3σ half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub successes: u64,
    pub samples: u64,
    pub rate: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn new(successes: u64, samples: u64) -> Self {
        let rate = if samples == 0 { 0.0 } else { successes as f64 / samples as f64 };
        Self { successes, samples, rate, half_width: binomial_half_width(rate, samples) }
    }

    /// Whether `expected` is within 3σ of the observed rate, using the
    /// binomial spread at `expected` itself.
    pub fn consistent_with(&self, expected: f64) -> bool {
        (self.rate - expected).abs() <= binomial_half_width(expected, self.samples)
    }
}

/// 3·√(p(1−p)/n); zero for n = 0.
pub fn binomial_half_width(p: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        SIGMAS * (p * (1.0 - p) / n as f64).sqrt()
    }
}

/// Pearson statistic of `counts` against a uniform distribution.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    if n == 0 || counts.is_empty() {
        return 0.0;
    }
    let expected = n as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

/// Mean plus three standard deviations of a chi-square variable with `df`
/// degrees of freedom: df + 3·√(2·df).
pub fn chi_square_threshold(df: usize) -> f64 {
    df as f64 + SIGMAS * (2.0 * df as f64).sqrt()
}

/// Independence test of a 4×4 contingency table of (guess, truth).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndependenceTest {
    /// Plug-in mutual information, in bits.
    pub mutual_information: f64,
    /// G = 2·N·I (nats), asymptotically χ² with 9 degrees of freedom.
    pub g_statistic: f64,
    pub threshold: f64,
    pub independent: bool,
}

pub fn independence_test(table: &[[u64; 4]; 4]) -> IndependenceTest {
    let n: u64 = table.iter().flatten().sum();
    let threshold = chi_square_threshold(9);
    if n == 0 {
        return IndependenceTest { mutual_information: 0.0, g_statistic: 0.0, threshold, independent: true };
    }
    let n = n as f64;
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let cols: Vec<f64> = (0..4).map(|c| table.iter().map(|r| r[c]).sum::<u64>() as f64).collect();
    let mut mi_nats = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let pij = count as f64 / n;
            mi_nats += pij * (pij * n * n / (rows[i] * cols[j])).ln();
        }
    }
    let g = 2.0 * n * mi_nats;
    IndependenceTest {
        mutual_information: mi_nats / std::f64::consts::LN_2,
        g_statistic: g,
        threshold,
        independent: g <= threshold,
    }
}
