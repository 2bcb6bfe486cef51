//! Pure per-player game functions: achievable rate, its derivative,
//! shared-band interference, SIR, and the best response.
//!
//! Player `k`'s utility is its achievable rate (normalized by the total
//! bandwidth):
//!
//! ```text
//! u_k(x) = alpha  * log2(1 + (1-x_k) P_k c_kk / (n0*alpha + I_k(x)))
//!        + beta_k * log2(1 +   x_k  P_k c_kk / (n0*beta_k))
//! ```
//!
//! where `I_k(x) = sum_{j != k} P_j c_jk (1 - x_j)` is the aggregate
//! interference at player `k`'s receiver. The utility is strictly concave in
//! `x_k`, so the best response is the clamped stationary point
//!
//! ```text
//! BR_k(x_{-k}) = min{ beta_k/(alpha+beta_k) * [1 + I_k/(P_k c_kk)], 1 }.
//! ```
//!
//! Best responses are computed from this interference form throughout; the
//! SIR is exposed for diagnostics only. All functions here are pure and safe
//! for concurrent use.

use crate::config::{NetworkConfig, PlayerView, StrategyProfile};
use crate::error::Result;

/// Aggregate shared-band interference at player `k`'s receiver:
/// `sum_{j != k} P_j c_jk (1 - x_j)`.
pub fn interference(config: &NetworkConfig, profile: &StrategyProfile, k: usize) -> Result<f64> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    Ok(interference_unchecked(config, profile.as_slice(), k))
}

pub(crate) fn interference_unchecked(config: &NetworkConfig, x: &[f64], k: usize) -> f64 {
    let mut total = 0.0;
    for (j, &xj) in x.iter().enumerate() {
        if j != k {
            total += config.power(j) * config.gain(k, j) * (1.0 - xj);
        }
    }
    total
}

/// Achievable rate of player `k` in bits per Hertz. Finite and nonnegative
/// for every valid input.
pub fn utility(config: &NetworkConfig, profile: &StrategyProfile, k: usize) -> Result<f64> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    Ok(utility_unchecked(config, profile.as_slice(), k))
}

pub(crate) fn utility_unchecked(config: &NetworkConfig, x: &[f64], k: usize) -> f64 {
    let alpha = config.alpha();
    let beta = config.beta(k);
    let own = config.power(k) * config.gain(k, k);
    let interf = interference_unchecked(config, x, k);
    let shared = alpha * (1.0 + (1.0 - x[k]) * own / (config.noise_density() * alpha + interf)).log2();
    let private = beta * (1.0 + x[k] * own / (config.noise_density() * beta)).log2();
    shared + private
}

/// Closed-form partial derivative of `utility` with respect to `x_k`:
///
/// ```text
/// du_k/dx_k = (P_k c_kk / ln 2) * [ beta_k / (n0*beta_k + x_k P_k c_kk)
///           - alpha / (n0*alpha + sum_{j in K} (1-x_j) P_j c_jk) ]
/// ```
///
/// Note the second denominator sums over all players including `k`.
pub fn utility_derivative(
    config: &NetworkConfig,
    profile: &StrategyProfile,
    k: usize,
) -> Result<f64> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    let x = profile.as_slice();
    let alpha = config.alpha();
    let beta = config.beta(k);
    let own = config.power(k) * config.gain(k, k);
    let shared_den =
        config.noise_density() * alpha + interference_unchecked(config, x, k) + (1.0 - x[k]) * own;
    let private_den = config.noise_density() * beta + x[k] * own;
    Ok(own / std::f64::consts::LN_2 * (beta / private_den - alpha / shared_den))
}

/// Unclamped stationary point of `u_k` in `x_k`, given the opponents'
/// strategies. May exceed 1; equals [`best_response`] whenever it does not.
pub fn unconstrained_response(
    config: &NetworkConfig,
    profile: &StrategyProfile,
    k: usize,
) -> Result<f64> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    Ok(unconstrained_response_unchecked(config, profile.as_slice(), k))
}

pub(crate) fn unconstrained_response_unchecked(
    config: &NetworkConfig,
    x: &[f64],
    k: usize,
) -> f64 {
    let beta = config.beta(k);
    let own = config.power(k) * config.gain(k, k);
    beta / (config.alpha() + beta) * (1.0 + interference_unchecked(config, x, k) / own)
}

/// Best response of player `k`: the utility-maximizing private-band fraction
/// given the opponents' strategies. Always lies in
/// `[beta_k/(alpha+beta_k), 1]` and is independent of `profile[k]` itself.
pub fn best_response(config: &NetworkConfig, profile: &StrategyProfile, k: usize) -> Result<f64> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    Ok(best_response_unchecked(config, profile.as_slice(), k))
}

pub(crate) fn best_response_unchecked(config: &NetworkConfig, x: &[f64], k: usize) -> f64 {
    unconstrained_response_unchecked(config, x, k).min(1.0)
}

/// Shared-band signal-to-interference ratio of player `k`:
/// `P_k c_kk (1 - x_k) / I_k`. Returns `+inf` whenever the interference is
/// zero, including the 0/0 case at `x_k = 1` (the SIR is diagnostic only; no
/// update rule consumes it).
pub fn sir(config: &NetworkConfig, profile: &StrategyProfile, k: usize) -> Result<f64> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    Ok(sir_unchecked(config, profile.as_slice(), k))
}

pub(crate) fn sir_unchecked(config: &NetworkConfig, x: &[f64], k: usize) -> f64 {
    let interf = interference_unchecked(config, x, k);
    if interf == 0.0 {
        return f64::INFINITY;
    }
    config.power(k) * config.gain(k, k) * (1.0 - x[k]) / interf
}

/// Interference and SIR of player `k` bundled for diagnostics.
pub fn player_view(config: &NetworkConfig, profile: &StrategyProfile, k: usize) -> Result<PlayerView> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    Ok(PlayerView {
        player: k,
        interference: interference_unchecked(config, profile.as_slice(), k),
        sir: sir_unchecked(config, profile.as_slice(), k),
    })
}
