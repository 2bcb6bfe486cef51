//! Network configuration and strategy types.
//!
//! A game instance is described by a [`NetworkConfig`]: `K` service
//! providers, a shared band of bandwidth fraction `alpha`, one private band
//! of fraction `beta[k]` per provider, power budgets, a `K x K` normalized
//! gain matrix, and the noise power spectral density. All quantities are
//! dimensionless (rates are normalized by the total bandwidth, gains by the
//! same factor).
//!
//! The gain matrix is stored receiver-major: entry `(k, j)` is the gain from
//! transmitter `j` to receiver `k`. This makes the weak-interference
//! condition a row-sum test.

use crate::error::{Error, Result};

/// Tolerance on the bandwidth identity `alpha + sum(beta) = 1`.
pub const BANDWIDTH_SUM_TOL: f64 = 1e-9;

/// Immutable, validated game parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    alpha: f64,
    beta: Vec<f64>,
    power: Vec<f64>,
    gain: Vec<Vec<f64>>,
    noise_density: f64,
}

impl NetworkConfig {
    /// Builds a configuration, validating every invariant.
    ///
    /// `gain[k][j]` is the normalized gain from transmitter `j` to
    /// receiver `k`; diagonals must be positive, off-diagonals nonnegative.
    /// The bandwidth fractions must satisfy `alpha + sum(beta) = 1` within
    /// [`BANDWIDTH_SUM_TOL`].
    pub fn new(
        alpha: f64,
        beta: Vec<f64>,
        power: Vec<f64>,
        gain: Vec<Vec<f64>>,
        noise_density: f64,
    ) -> Result<Self> {
        let violations = Self::check(alpha, &beta, &power, &gain, noise_density);
        if violations.is_empty() {
            Ok(NetworkConfig {
                alpha,
                beta,
                power,
                gain,
                noise_density,
            })
        } else {
            Err(Error::Validation { violations })
        }
    }

    /// Like [`NetworkConfig::new`], but rescales `alpha` and `beta` by their
    /// common sum first so that the bandwidth identity holds exactly. Useful
    /// for hand-written inputs that carry rounding.
    pub fn new_normalized(
        alpha: f64,
        beta: Vec<f64>,
        power: Vec<f64>,
        gain: Vec<Vec<f64>>,
        noise_density: f64,
    ) -> Result<Self> {
        let sum = alpha + beta.iter().sum::<f64>();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::validation(format!(
                "alpha + sum(beta) = {sum} cannot be normalized"
            )));
        }
        let beta = beta.into_iter().map(|b| b / sum).collect();
        Self::new(alpha / sum, beta, power, gain, noise_density)
    }

    /// Collects every violated invariant; empty means valid.
    pub fn check(
        alpha: f64,
        beta: &[f64],
        power: &[f64],
        gain: &[Vec<f64>],
        noise_density: f64,
    ) -> Vec<String> {
        let mut v = Vec::new();
        let k = beta.len();
        if k == 0 {
            v.push("beta: at least one player is required".into());
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            v.push(format!("alpha: must be finite and > 0, got {alpha}"));
        }
        for (i, &b) in beta.iter().enumerate() {
            if !(b.is_finite() && b > 0.0) {
                v.push(format!("beta[{i}]: must be finite and > 0, got {b}"));
            }
        }
        if power.len() != k {
            v.push(format!(
                "power: expected length {k}, got {}",
                power.len()
            ));
        }
        for (i, &p) in power.iter().enumerate() {
            if !(p.is_finite() && p > 0.0) {
                v.push(format!("power[{i}]: must be finite and > 0, got {p}"));
            }
        }
        if gain.len() != k {
            v.push(format!("gain: expected {k} rows, got {}", gain.len()));
        }
        for (r, row) in gain.iter().enumerate() {
            if row.len() != k {
                v.push(format!(
                    "gain[{r}]: expected {k} columns, got {}",
                    row.len()
                ));
                continue;
            }
            for (c, &g) in row.iter().enumerate() {
                if r == c {
                    if !(g.is_finite() && g > 0.0) {
                        v.push(format!(
                            "gain[{r}][{c}]: diagonal must be finite and > 0, got {g}"
                        ));
                    }
                } else if !(g.is_finite() && g >= 0.0) {
                    v.push(format!(
                        "gain[{r}][{c}]: must be finite and >= 0, got {g}"
                    ));
                }
            }
        }
        if !(noise_density.is_finite() && noise_density > 0.0) {
            v.push(format!(
                "noise_density: must be finite and > 0, got {noise_density}"
            ));
        }
        let sum = alpha + beta.iter().sum::<f64>();
        if sum.is_finite() && (sum - 1.0).abs() > BANDWIDTH_SUM_TOL {
            v.push(format!(
                "alpha + sum(beta) must equal 1 (bandwidth identity), got {sum} \
                 (deviation {:+e})",
                sum - 1.0
            ));
        }
        v
    }

    /// Number of players `K`.
    pub fn num_players(&self) -> usize {
        self.beta.len()
    }

    /// Shared-band bandwidth fraction.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Private-band fraction of player `k`.
    pub fn beta(&self, k: usize) -> f64 {
        self.beta[k]
    }

    /// All private-band fractions.
    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    /// Average power budget of player `k`.
    pub fn power(&self, k: usize) -> f64 {
        self.power[k]
    }

    /// All power budgets.
    pub fn powers(&self) -> &[f64] {
        &self.power
    }

    /// Normalized gain from transmitter `j` to receiver `k`.
    pub fn gain(&self, k: usize, j: usize) -> f64 {
        self.gain[k][j]
    }

    /// Gain matrix rows, receiver-major.
    pub fn gain_rows(&self) -> &[Vec<f64>] {
        &self.gain
    }

    /// Noise power spectral density.
    pub fn noise_density(&self) -> f64 {
        self.noise_density
    }

    pub(crate) fn check_player(&self, k: usize) -> Result<()> {
        if k < self.num_players() {
            Ok(())
        } else {
            Err(Error::PlayerIndex {
                index: k,
                num_players: self.num_players(),
            })
        }
    }

    pub(crate) fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.len() == self.num_players() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                what: "strategy profile",
                expected: self.num_players(),
                actual: profile.len(),
            })
        }
    }
}

/// One power-split ratio per player: `x[k]` is the fraction of player `k`'s
/// power on its private band, the remaining `1 - x[k]` goes to the shared
/// band. Every entry lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile(Vec<f64>);

impl StrategyProfile {
    /// Validates that every entry is finite and within `[0, 1]`.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        let mut violations = Vec::new();
        if x.is_empty() {
            violations.push("x: empty strategy profile".into());
        }
        for (i, &v) in x.iter().enumerate() {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                violations.push(format!("x[{i}]: must lie in [0, 1], got {v}"));
            }
        }
        if violations.is_empty() {
            Ok(StrategyProfile(x))
        } else {
            Err(Error::Validation { violations })
        }
    }

    /// Wraps values that are already known to lie in `[0, 1]` (e.g. outputs
    /// of the best-response map).
    pub(crate) fn from_computed(x: Vec<f64>) -> Self {
        debug_assert!(x.iter().all(|v| (0.0..=1.0).contains(v)));
        StrategyProfile(x)
    }

    /// Constant profile `value^K`.
    pub fn uniform(value: f64, num_players: usize) -> Result<Self> {
        Self::new(vec![value; num_players])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for StrategyProfile {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl AsRef<[f64]> for StrategyProfile {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Per-player diagnostic view: aggregate shared-band interference and the
/// resulting signal-to-interference ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerView {
    /// Player index.
    pub player: usize,
    /// Aggregate shared-band interference measured at this player's receiver.
    pub interference: f64,
    /// Shared-band SIR; `+inf` whenever the interference is zero
    /// (diagnostic convention, including the 0/0 case at `x[k] = 1`).
    pub sir: f64,
}
