mod common;

use common::{decoy_intercept_error, pair_intercept_error, three_sigma, Oracle, TOL};
use qpc_core::adversary::intercept_resend;
use qpc_core::protocol::{bell_pair_check, decoy_round_check, prepare_checking_pairs, prepare_decoys};
use qpc_core::quantum::{BellLabel, Engine, Register};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const A1: usize = 0;
const A2: usize = 1;
const B1: usize = 2;
const B2: usize = 3;
const C1: usize = 4;
const C2: usize = 5;

#[test]
fn swap_table_matches_oracle_for_all_sixteen_pairs() {
    for p in 0..4u8 {
        for q in 0..4u8 {
            // (A1, A2) in P, (C1, C2) in Q; measure (A1, C2) then (C1, A2).
            let state = Oracle::product_of_bells(&[p, q]);
            let joint = state.joint_bell(&[(0, 3), (2, 1)]);
            for m in 0..4u8 {
                let p_m: f64 = (0..4u8).map(|r| joint.get(&vec![m, r]).copied().unwrap_or(0.0)).sum();
                assert!((p_m - 0.25).abs() < TOL, "P={p} Q={q} first outcome {m} has probability {p_m}");
                let expected =
                    BellLabel::from_code(m).compose(BellLabel::from_code(p)).compose(BellLabel::from_code(q)).code();
                let conditional = joint.get(&vec![m, expected]).copied().unwrap_or(0.0) / p_m;
                assert!((conditional - 1.0).abs() < TOL, "P={p} Q={q} M={m}");
            }
        }
    }
}

#[test]
fn compose_is_the_conditional_swap_outcome() {
    // Starting from (P, Q) after a Φ+ outcome, the residual is P∘Q.
    for p in BellLabel::ALL {
        for q in BellLabel::ALL {
            let state = Oracle::product_of_bells(&[p.code(), q.code()]);
            let post = state.project_bell(0, 3, 0b00).normalized();
            let d = post.bell_distribution(2, 1);
            assert!((d[p.compose(q).index()] - 1.0).abs() < TOL, "{p} {q}");
        }
    }
}

fn three_pair_joint(order: &[(usize, usize)]) -> std::collections::BTreeMap<Vec<u8>, f64> {
    Oracle::product_of_bells(&[0, 0, 0]).joint_bell(order)
}

#[test]
fn third_party_outcome_is_xor_of_the_others_on_every_branch() {
    let joint = three_pair_joint(&[(A1, C2), (B1, A2), (C1, B2)]);
    assert_eq!(joint.len(), 16);
    for (outcomes, p) in &joint {
        let (ra, rb, rc) = (outcomes[0], outcomes[1], outcomes[2]);
        assert_eq!(rc, ra ^ rb);
        assert!((p - 1.0 / 16.0).abs() < TOL);
    }
}

#[test]
fn final_measurements_commute() {
    let alice = (A1, C2);
    let bob = (B1, A2);
    let tp = (C1, B2);
    let reference = three_pair_joint(&[alice, bob, tp]);
    let orders = [[alice, tp, bob], [bob, alice, tp], [bob, tp, alice], [tp, alice, bob], [tp, bob, alice]];
    for order in orders {
        let joint = three_pair_joint(&order);
        // Re-key by party so the maps are comparable.
        let index = |pair: (usize, usize)| order.iter().position(|o| *o == pair).unwrap();
        let (ia, ib, ic) = (index(alice), index(bob), index(tp));
        for (k, p) in &joint {
            let key = vec![k[ia], k[ib], k[ic]];
            assert!((reference[&key] - p).abs() < TOL, "order {order:?}");
        }
    }
}

/// Walks one honest measurement sequence, checking every intermediate
/// distribution the register reports against the oracle conditioned on the
/// outcomes seen so far.
fn walk(engine: Engine, seed: u64) -> Vec<u8> {
    let mut reg = Register::new(engine, seed);
    let (a1, a2) = reg.prepare_bell(BellLabel::PhiPlus);
    let (b1, b2) = reg.prepare_bell(BellLabel::PhiPlus);
    let (c1, c2) = reg.prepare_bell(BellLabel::PhiPlus);
    let mut oracle = Oracle::product_of_bells(&[0, 0, 0]);
    let mut outcomes = Vec::new();
    for ((x, y), (i, j)) in [((a1, c2), (A1, C2)), ((b1, a2), (B1, A2)), ((c1, b2), (C1, B2))] {
        let got = reg.bell_distribution(x, y).unwrap();
        let want = oracle.bell_distribution(i, j);
        for k in 0..4 {
            assert!((got[k] - want[k]).abs() < 1e-9, "{engine:?} seed {seed}: {got:?} vs {want:?}");
        }
        let label = reg.bell_measure(x, y).unwrap();
        oracle = oracle.project_bell(i, j, label.code()).normalized();
        outcomes.push(label.code());
    }
    outcomes
}

#[test]
fn register_distributions_match_oracle_and_sample_it() {
    const N: u64 = 10_000;
    for engine in [Engine::Symbolic, Engine::Dense] {
        let mut counts = [0u64; 64];
        for seed in 0..N {
            let o = walk(engine, seed);
            assert_eq!(o[2], o[0] ^ o[1]);
            counts[(o[0] as usize) << 4 | (o[1] as usize) << 2 | o[2] as usize] += 1;
        }
        let joint = three_pair_joint(&[(A1, C2), (B1, A2), (C1, B2)]);
        for (key, p) in &joint {
            let idx = (key[0] as usize) << 4 | (key[1] as usize) << 2 | key[2] as usize;
            let freq = counts[idx] as f64 / N as f64;
            assert!((freq - p).abs() <= three_sigma(*p, N), "{engine:?} {key:?}: {freq} vs {p}");
        }
        let impossible: u64 = (0..64)
            .filter(|i| !joint.contains_key(&vec![(i >> 4) as u8, ((i >> 2) & 3) as u8, (i & 3) as u8]))
            .map(|i| counts[i])
            .sum();
        assert_eq!(impossible, 0);
    }
}

#[test]
fn intercept_oracles() {
    assert!((decoy_intercept_error() - 0.25).abs() < TOL);
    assert!((pair_intercept_error() - 0.25).abs() < TOL);
}

#[test]
fn decoy_intercept_rate_matches_oracle() {
    const N: usize = 10_000;
    let mut reg = Register::new(Engine::Symbolic, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (decoys, qubits) = prepare_decoys(N, &mut reg, &mut rng);
    intercept_resend(&qubits, &mut reg, &mut rng).unwrap();
    let rate = decoy_round_check(&decoys, &qubits, &mut reg).unwrap();
    let p = decoy_intercept_error();
    assert!((rate - p).abs() <= three_sigma(p, N as u64), "{rate}");
}

#[test]
fn pair_intercept_rate_matches_oracle() {
    const N: usize = 10_000;
    for engine in [Engine::Symbolic, Engine::Dense] {
        let mut reg = Register::new(engine, 21);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let pairs = prepare_checking_pairs(N, &mut reg);
        let (first, second): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        intercept_resend(&second, &mut reg, &mut rng).unwrap();
        let rate = bell_pair_check(&first, &second, &mut reg, &mut rng).unwrap();
        let p = pair_intercept_error();
        assert!((rate - p).abs() <= three_sigma(p, N as u64), "{engine:?}: {rate}");
    }
}

#[test]
fn untouched_checks_are_clean() {
    let mut reg = Register::new(Engine::Dense, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (decoys, qubits) = prepare_decoys(200, &mut reg, &mut rng);
    assert_eq!(decoy_round_check(&decoys, &qubits, &mut reg).unwrap(), 0.0);
    let (first, second): (Vec<_>, Vec<_>) = prepare_checking_pairs(200, &mut reg).into_iter().unzip();
    assert_eq!(bell_pair_check(&first, &second, &mut reg, &mut rng).unwrap(), 0.0);
}
