//! Shared generators and oracles for the integration test suites.
// Each test binary compiles this module separately and uses its own subset.
#![allow(dead_code)]

use cog_core::equilibrium::build_linear_system;
use cog_core::{NetworkConfig, StrategyProfile};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random valid configuration with `k` players.
///
/// Ranges are chosen so that the finite-difference derivative oracle stays
/// well conditioned: noise floor and diagonal gains bounded away from zero,
/// moderate powers and cross-gains.
pub fn random_config(rng: &mut ChaCha8Rng, k: usize) -> NetworkConfig {
    let alpha = rng.gen_range(0.3..0.7);
    let remainder = 1.0 - alpha;
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..1.5)).collect();
    let raw_sum: f64 = raw.iter().sum();
    let beta: Vec<f64> = raw.iter().map(|r| remainder * r / raw_sum).collect();
    let power: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..2.0)).collect();
    let gain: Vec<Vec<f64>> = (0..k)
        .map(|r| {
            (0..k)
                .map(|c| {
                    if r == c {
                        rng.gen_range(0.5..2.0)
                    } else {
                        rng.gen_range(0.0..1.5)
                    }
                })
                .collect()
        })
        .collect();
    let noise = rng.gen_range(5e-3..0.1);
    NetworkConfig::new(alpha, beta, power, gain, noise).expect("generated config is valid")
}

/// Strategy profile with every coordinate in `[margin, 1 - margin]`.
pub fn random_interior_profile(rng: &mut ChaCha8Rng, k: usize, margin: f64) -> StrategyProfile {
    StrategyProfile::new((0..k).map(|_| rng.gen_range(margin..1.0 - margin)).collect()).unwrap()
}

/// Two-player configuration whose gain ratios sit at `m1`, `m2` times the
/// classification thresholds. `m = 1` lands exactly on a threshold (up to
/// one rounding), `m < 1` below, `m > 1` above.
pub fn two_player_with_margins(rng: &mut ChaCha8Rng, m1: f64, m2: f64) -> NetworkConfig {
    let alpha = rng.gen_range(0.3..0.7);
    let remainder = 1.0 - alpha;
    let split = rng.gen_range(0.35..0.65);
    let beta = vec![remainder * split, remainder * (1.0 - split)];
    let power = vec![rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
    let diag = [rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)];
    let threshold1 = (power[1] / power[0]) * (alpha + beta[0]) / beta[1];
    let threshold2 = (power[0] / power[1]) * (alpha + beta[1]) / beta[0];
    let c12 = m1 * threshold1 * diag[1];
    let c21 = m2 * threshold2 * diag[0];
    let gain = vec![vec![diag[0], c21], vec![c12, diag[1]]];
    NetworkConfig::new(alpha, beta, power, gain, rng.gen_range(5e-3..0.1))
        .expect("generated config is valid")
}

/// Random two-player instance suitable for grid-oracle comparison: the gain
/// ratios keep a healthy margin from the classification thresholds, the
/// best-response slopes stay moderate, and their product stays away from 1,
/// so equilibria are well separated and the near-fixed-point plateaus stay
/// compact at the test resolution.
pub fn random_two_player_for_oracle(rng: &mut ChaCha8Rng) -> NetworkConfig {
    loop {
        let margin = |rng: &mut ChaCha8Rng| loop {
            let m: f64 = rng.gen_range(0.15..2.2);
            if (m - 1.0).abs() >= 0.3 {
                return m;
            }
        };
        let (m1, m2) = (margin(rng), margin(rng));
        let cfg = two_player_with_margins(rng, m1, m2);
        let sys = build_linear_system(&cfg);
        let b1 = sys.a_matrix()[0][1].abs();
        let b2 = sys.a_matrix()[1][0].abs();
        if b1 <= 2.2 && b2 <= 2.2 && (b1 * b2 - 1.0).abs() >= 0.25 {
            return cfg;
        }
    }
}

/// Independent evaluation of the rate formula, written directly from its
/// definition and kept separate from the library implementation.
pub fn utility_reference(config: &NetworkConfig, x: &[f64], k: usize) -> f64 {
    let n = config.num_players();
    let interference: f64 = (0..n)
        .filter(|&j| j != k)
        .map(|j| config.power(j) * config.gain(k, j) * (1.0 - x[j]))
        .sum();
    let own = config.power(k) * config.gain(k, k);
    let shared = config.alpha()
        * (1.0 + (1.0 - x[k]) * own / (config.noise_density() * config.alpha() + interference))
            .log2();
    let private = config.beta(k)
        * (1.0 + x[k] * own / (config.noise_density() * config.beta(k))).log2();
    shared + private
}
