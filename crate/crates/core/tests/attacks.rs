mod common;

use common::{three_sigma, Oracle, TOL};
use qpc_core::adversary::{AdversaryKind, TpMeasure};
use qpc_core::analysis::{chi_square_threshold, chi_square_uniform, monte_carlo, Scenario, SecretSource};
use qpc_core::protocol::{run, Channel, CheckScope, Honest, ProtocolConfig, ProtocolKind, SecretInput};
use qpc_core::quantum::{BellLabel, Engine};
use qpc_core::rng::trial_seed;

fn random16() -> SecretSource {
    SecretSource::Random { length: 16 }
}

#[test]
fn worked_deduction() {
    let deduced = BellLabel::PhiMinus.compose(BellLabel::PsiPlus);
    assert_eq!(deduced, BellLabel::PsiMinus);
    assert_eq!(deduced.code(), 0b11);
    // Oracle: (C1, A2) in Φ−, (B1, B2) in Φ+; TP sees Ψ+ on (C1, B2), which
    // leaves Bob's (B1, A2) in Ψ− with certainty.
    let state = Oracle::product_of_bells(&[BellLabel::PhiMinus.code(), 0b00]);
    // qubits: C1 = 0, A2 = 1, B1 = 2, B2 = 3
    let post = state.project_bell(0, 3, BellLabel::PsiPlus.code()).normalized();
    assert!((post.bell_distribution(2, 1)[0b11] - 1.0).abs() < TOL);
}

#[test]
fn early_measurement_recovers_both_secrets_undetected() {
    let x = SecretInput::parse("1011000111010110").unwrap();
    let y = SecretInput::parse("0011010111000110").unwrap();
    for engine in [Engine::Symbolic, Engine::Dense] {
        let cfg = ProtocolConfig { engine, ..ProtocolConfig::default() };
        for seed in 0..100 {
            let report = run(ProtocolKind::Original, &x, &y, &cfg, seed, &mut TpMeasure::default()).unwrap();
            let attack = report.attack.as_ref().unwrap();
            assert_eq!(attack.recovered_x.as_ref(), Some(x.bits()));
            assert_eq!(attack.recovered_y.as_ref(), Some(y.bits()));
            assert!(!attack.detected);
            assert!(attack.per_group_guesses.iter().all(|g| g.correct));
            assert!(report.detection_events.is_empty());
        }
    }
}

#[test]
fn early_measurement_is_passive() {
    for i in 0..300u64 {
        let seed = trial_seed(123, i);
        let (x, y) = random16().draw(seed).unwrap();
        let cfg = ProtocolConfig::default();
        let honest = run(ProtocolKind::Original, &x, &y, &cfg, seed, &mut Honest).unwrap();
        let attacked = run(ProtocolKind::Original, &x, &y, &cfg, seed, &mut TpMeasure::default()).unwrap();
        assert_eq!(honest.verdict, attacked.verdict);
        assert_eq!(honest.r, attacked.r);
        assert_eq!(honest.checks, attacked.checks);
    }
}

#[test]
fn monte_carlo_break_reproduction() {
    let s = Scenario::new(ProtocolKind::Original, AdversaryKind::TpMeasure, random16());
    let summary = monte_carlo(&s, 1_000, 2024).unwrap();
    assert_eq!(summary.attack_full_recovery_rate.unwrap().successes, 1_000);
    assert_eq!(summary.detection_rate.successes, 0);
    assert_eq!(summary.verdict_accuracy.successes, 1_000);
}

#[test]
fn guessing_third_party_learns_nothing() {
    const TRIALS: u64 = 10_000;
    let s = Scenario::new(ProtocolKind::Improved, AdversaryKind::TpGuess, SecretSource::Random { length: 2 });
    let summary = monte_carlo(&s, TRIALS, 99).unwrap();
    let acc = summary.per_group_guess_accuracy.unwrap();
    assert_eq!(acc.samples, TRIALS);
    assert!((acc.rate - 0.25).abs() <= three_sigma(0.25, TRIALS), "{}", acc.rate);
    let independence = summary.guess_independence.unwrap();
    assert!(independence.independent, "{independence:?}");
    assert_eq!(summary.detection_rate.successes, 0);
}

#[test]
fn guesses_are_uniform() {
    // Marginal of the guesses alone, from individual runs.
    let mut counts = [0u64; 4];
    for i in 0..4_000u64 {
        let seed = trial_seed(5, i);
        let s = Scenario::new(ProtocolKind::Improved, AdversaryKind::TpGuess, SecretSource::Random { length: 2 });
        let trial = s.run_once(seed).unwrap();
        for g in &trial.report.attack.unwrap().per_group_guesses {
            counts[g.guess as usize] += 1;
        }
    }
    assert!(chi_square_uniform(&counts) <= chi_square_threshold(3), "{counts:?}");
}

#[test]
fn decoys_catch_intercept_resend() {
    const TRIALS: u64 = 2_000;
    let mut s = Scenario::new(
        ProtocolKind::Improved,
        AdversaryKind::InterceptResend { channel: Channel::TpToBob },
        SecretSource::Random { length: 4 },
    );
    s.config.checks = Some(4);
    let summary = monte_carlo(&s, TRIALS, 8).unwrap();
    let p_abort = 1.0 - 0.75f64.powi(4);
    let d = summary.detection_rate;
    assert!((d.rate - p_abort).abs() <= three_sigma(p_abort, TRIALS), "{}", d.rate);
    let errors = summary.check_error_rates[&CheckScope::AliceTpBob];
    assert!((errors.rate - 0.25).abs() <= three_sigma(0.25, errors.samples), "{}", errors.rate);
}

#[test]
fn bell_pair_checks_catch_intercept_resend() {
    const TRIALS: u64 = 10_000;
    let mut s = Scenario::new(
        ProtocolKind::Original,
        AdversaryKind::InterceptResend { channel: Channel::AliceToTp },
        SecretSource::Random { length: 4 },
    );
    s.config.checks = Some(3);
    let summary = monte_carlo(&s, TRIALS, 17).unwrap();
    let p_pair = common::pair_intercept_error();
    let p_abort = 1.0 - (1.0 - p_pair).powi(3);
    let d = summary.detection_rate;
    assert!((d.rate - p_abort).abs() <= three_sigma(p_abort, TRIALS), "{}", d.rate);
    let errors = summary.check_error_rates[&CheckScope::AliceToTp];
    assert!((errors.rate - p_pair).abs() <= three_sigma(p_pair, errors.samples), "{}", errors.rate);
}

#[test]
fn blind_measurement_disturbs_decoys() {
    // No reference value exists; only require that the check sees it.
    let s = Scenario::new(ProtocolKind::Improved, AdversaryKind::TpBlindMeasure, random16());
    let summary = monte_carlo(&s, 300, 4).unwrap();
    assert!(summary.detection_rate.rate > 0.5, "{:?}", summary.detection_rate);
}
