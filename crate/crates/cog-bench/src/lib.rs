//! Shared fixtures for the engine benchmarks.

use cog_core::NetworkConfig;

/// Reference two-player game with a unique interior equilibrium.
pub fn two_player_unique() -> NetworkConfig {
    NetworkConfig::new(
        0.5,
        vec![0.25, 0.25],
        vec![1.0, 1.0],
        vec![vec![1.0, 0.6], vec![0.4, 1.0]],
        0.01,
    )
    .unwrap()
}

/// Reference four-player weak-interference game.
pub fn four_player_weak() -> NetworkConfig {
    NetworkConfig::new(
        0.5,
        vec![0.125; 4],
        vec![1.0; 4],
        vec![
            vec![1.0, 0.2, 0.1, 0.4],
            vec![0.4, 1.0, 0.5, 0.3],
            vec![0.3, 0.4, 1.0, 0.6],
            vec![0.4, 0.2, 0.5, 1.0],
        ],
        0.01,
    )
    .unwrap()
}

/// Synthetic weak-interference game with `k` players: unit diagonal gains,
/// uniform 0.1 cross gains.
pub fn uniform_weak(k: usize) -> NetworkConfig {
    let gain = (0..k)
        .map(|r| (0..k).map(|c| if r == c { 1.0 } else { 0.1 }).collect())
        .collect();
    NetworkConfig::new(0.5, vec![0.5 / k as f64; k], vec![1.0; k], gain, 0.01).unwrap()
}
