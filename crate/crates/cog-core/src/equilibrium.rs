//! Nash equilibrium computation and verification.
//!
//! Three independent routes are provided:
//!
//! * [`classify_two_player`] - closed-form case analysis for `K = 2`,
//!   covering the unique, two-, three-, and infinitely-many-equilibria
//!   regimes including the singular threshold subcases;
//! * [`solve_linear_ne`] - the `K`-player solver for the weak-interference
//!   regime, where every best response is linear and the unique equilibrium
//!   solves `(I - A) x = b` (direct elimination with partial pivoting, kept
//!   deliberately separate from the fixed-point iteration in `dynamics`);
//! * [`brute_force_ne`] - a grid-scan oracle that finds all approximate
//!   fixed points of the best-response map, used to cross-check the other
//!   two routes.

use std::collections::HashMap;

use crate::config::{NetworkConfig, StrategyProfile};
use crate::error::{Error, Result};
use crate::game::{best_response_unchecked, utility_unchecked};

/// Default relative tolerance for threshold-equality detection in the
/// two-player classification. The singular subcases are measure-zero but
/// deliberately constructible, so they must be reachable from config files.
pub const DEFAULT_CLASSIFY_EPS: f64 = 1e-12;

/// Default point budget for the brute-force grid scan.
pub const DEFAULT_GRID_BUDGET: u128 = 20_000_000;

/// True iff `profile` is a fixed point of the best-response map within
/// `tol`, i.e. `|x_k - BR_k(x_{-k})| <= tol` for every player. By strict
/// concavity of the per-player utility this is equivalent to the Nash
/// condition.
pub fn verify_ne(config: &NetworkConfig, profile: &StrategyProfile, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::validation(format!("tol: must be > 0, got {tol}")));
    }
    config.check_profile(profile)?;
    Ok(best_response_residual(config, profile.as_slice()) <= tol)
}

/// Largest per-player deviation from the best-response map,
/// `max_k |x_k - BR_k(x_{-k})|`.
pub fn best_response_residual(config: &NetworkConfig, x: &[f64]) -> f64 {
    (0..config.num_players())
        .map(|k| (x[k] - best_response_unchecked(config, x, k)).abs())
        .fold(0.0, f64::max)
}

/// Which side of a classification threshold a gain ratio falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    At,
    Above,
}

fn compare_ratio(ratio: f64, threshold: f64, eps: f64) -> Side {
    if (ratio - threshold).abs() <= eps * ratio.abs().max(threshold.abs()) {
        Side::At
    } else if ratio < threshold {
        Side::Below
    } else {
        Side::Above
    }
}

/// Structure of the two-player equilibrium set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPlayerKind {
    /// Both gain ratios below threshold: one equilibrium, strictly inside
    /// the strategy box, where both players tolerate interference.
    UniqueInterior,
    /// Player 1 retreats fully to its private band: the equilibrium is
    /// `(1, beta_2/(alpha+beta_2))`.
    UniqueBoundaryP1Saturates,
    /// Player 2 retreats fully: the equilibrium is
    /// `(beta_1/(alpha+beta_1), 1)`.
    UniqueBoundaryP2Saturates,
    /// Both ratios above threshold: the interior point plus both boundary
    /// equilibria.
    Three,
    /// Exactly one ratio at threshold: the interior point coincides with one
    /// boundary equilibrium, leaving two distinct equilibria.
    TwoSingular,
    /// Both ratios at threshold: the two best-response lines coincide and
    /// every point of the common segment is an equilibrium.
    InfiniteSegment,
}

/// Endpoints of the coincident best-response segment in the
/// [`TwoPlayerKind::InfiniteSegment`] case, from `(beta_1/(alpha+beta_1), 1)`
/// to `(1, beta_2/(alpha+beta_2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: StrategyProfile,
    pub end: StrategyProfile,
}

/// Classified equilibrium set of a two-player game.
///
/// `equilibria` lists every equilibrium except in the
/// [`TwoPlayerKind::InfiniteSegment`] case, where it is empty and `segment`
/// carries the endpoints instead. The `Three` case is ordered: interior
/// solution first, then `(f1(1), 1)`, then `(1, f2(1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPlayerClass {
    pub kind: TwoPlayerKind,
    pub equilibria: Vec<StrategyProfile>,
    pub segment: Option<Segment>,
}

/// Classifies the equilibrium set of a two-player game with the default
/// threshold-equality tolerance.
pub fn classify_two_player(config: &NetworkConfig) -> Result<TwoPlayerClass> {
    classify_two_player_with(config, DEFAULT_CLASSIFY_EPS)
}

/// Classifies the equilibrium set of a two-player game.
///
/// The case is selected by comparing `c_12/c_22` against
/// `(P_2/P_1)(alpha+beta_1)/beta_2` and `c_21/c_11` against
/// `(P_1/P_2)(alpha+beta_2)/beta_1`, with relative tolerance `eps` deciding
/// threshold equality. Ties on both comparisons resolve to the
/// infinite-segment subcase.
pub fn classify_two_player_with(config: &NetworkConfig, eps: f64) -> Result<TwoPlayerClass> {
    if config.num_players() != 2 {
        return Err(Error::Dimension {
            required: 2,
            actual: config.num_players(),
        });
    }
    let alpha = config.alpha();
    let (b1, b2) = (config.beta(0), config.beta(1));
    let (p1, p2) = (config.power(0), config.power(1));

    // Gain from transmitter 1 at receiver 2, relative to receiver 2's own link.
    let ratio1 = config.gain(1, 0) / config.gain(1, 1);
    let threshold1 = (p2 / p1) * (alpha + b1) / b2;
    // Gain from transmitter 2 at receiver 1, relative to receiver 1's own link.
    let ratio2 = config.gain(0, 1) / config.gain(0, 0);
    let threshold2 = (p1 / p2) * (alpha + b2) / b1;

    let side1 = compare_ratio(ratio1, threshold1, eps);
    let side2 = compare_ratio(ratio2, threshold2, eps);

    // Boundary equilibria: the retreating player saturates at 1 while the
    // other falls back to its zero-interference response.
    let p2_saturates = StrategyProfile::from_computed(vec![b1 / (alpha + b1), 1.0]);
    let p1_saturates = StrategyProfile::from_computed(vec![1.0, b2 / (alpha + b2)]);

    let class = match (side1, side2) {
        (Side::Below, Side::Below) => TwoPlayerClass {
            kind: TwoPlayerKind::UniqueInterior,
            equilibria: vec![interior_solution(config)?],
            segment: None,
        },
        (Side::At | Side::Above, Side::Below) => TwoPlayerClass {
            kind: TwoPlayerKind::UniqueBoundaryP2Saturates,
            equilibria: vec![p2_saturates],
            segment: None,
        },
        (Side::Below, Side::At | Side::Above) => TwoPlayerClass {
            kind: TwoPlayerKind::UniqueBoundaryP1Saturates,
            equilibria: vec![p1_saturates],
            segment: None,
        },
        (Side::Above, Side::Above) => TwoPlayerClass {
            kind: TwoPlayerKind::Three,
            equilibria: vec![interior_solution(config)?, p2_saturates, p1_saturates],
            segment: None,
        },
        (Side::At, Side::Above) | (Side::Above, Side::At) => TwoPlayerClass {
            kind: TwoPlayerKind::TwoSingular,
            equilibria: vec![p2_saturates, p1_saturates],
            segment: None,
        },
        (Side::At, Side::At) => TwoPlayerClass {
            kind: TwoPlayerKind::InfiniteSegment,
            equilibria: Vec::new(),
            segment: Some(Segment {
                start: p2_saturates,
                end: p1_saturates,
            }),
        },
    };
    Ok(class)
}

/// Intersection of the two unclamped best-response lines.
fn interior_solution(config: &NetworkConfig) -> Result<StrategyProfile> {
    let system = build_linear_system(config);
    let x = system.solve()?;
    Ok(StrategyProfile::from_computed(
        x.into_iter().map(|v| v.clamp(0.0, 1.0)).collect(),
    ))
}

/// Evaluates the weak-interference condition
/// `sum_{j != k} P_j c_jk < (alpha/beta_k) P_k c_kk` per player.
/// When it holds for everyone, every best response stays linear over the
/// whole strategy box and the game has a unique equilibrium.
pub fn weak_interference_holds(config: &NetworkConfig) -> Vec<bool> {
    (0..config.num_players())
        .map(|k| {
            let cross: f64 = (0..config.num_players())
                .filter(|&j| j != k)
                .map(|j| config.power(j) * config.gain(k, j))
                .sum();
            cross < config.alpha() / config.beta(k) * config.power(k) * config.gain(k, k)
        })
        .collect()
}

/// The linear fixed-point form of the best-response map, `x = A x + b`:
/// `A(k,k) = 0`, `A(k,j) = -(beta_k/(alpha+beta_k)) P_j c_jk / (P_k c_kk)`,
/// and `b(k)` is the best response to an all-zeros profile.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearBestResponseSystem {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl LinearBestResponseSystem {
    /// Coefficient matrix `A` (rows indexed by the responding player).
    pub fn a_matrix(&self) -> &[Vec<f64>] {
        &self.a
    }

    /// Offset vector `b`.
    pub fn b_vector(&self) -> &[f64] {
        &self.b
    }

    /// Maximum absolute off-diagonal row sum of `A`. Under weak interference
    /// this is strictly below `max_k alpha/(alpha+beta_k) <= 1`, which bounds
    /// the spectral radius and certifies convergence of the linear dynamics.
    pub fn gershgorin_bound(&self) -> f64 {
        self.a
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Solves `(I - A) x = b` by Gaussian elimination with partial pivoting.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.b.len();
        let mut m: Vec<Vec<f64>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { 1.0 - self.a[r][c] } else { -self.a[r][c] })
                    .collect()
            })
            .collect();
        let mut rhs = self.b.clone();

        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| m[r1][col].abs().total_cmp(&m[r2][col].abs()))
                .unwrap();
            if m[pivot_row][col] == 0.0 {
                return Err(Error::Internal(
                    "singular best-response system".to_string(),
                ));
            }
            m.swap(col, pivot_row);
            rhs.swap(col, pivot_row);
            let pivot = m[col].clone();
            for r in col + 1..n {
                let factor = m[r][col] / pivot[col];
                if factor != 0.0 {
                    for c in col..n {
                        m[r][c] -= factor * pivot[c];
                    }
                    rhs[r] -= factor * rhs[col];
                }
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let mut s = rhs[r];
            for c in r + 1..n {
                s -= m[r][c] * x[c];
            }
            x[r] = s / m[r][r];
        }
        Ok(x)
    }

    /// Residual `max_k |x_k - (A x + b)_k|` of a candidate fixed point.
    pub fn fixed_point_residual(&self, x: &[f64]) -> f64 {
        let n = self.b.len();
        (0..n)
            .map(|k| {
                let mut v = self.b[k];
                for (a_kj, &xj) in self.a[k].iter().zip(x) {
                    v += a_kj * xj;
                }
                (x[k] - v).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Builds the linear system `x = A x + b` for any valid configuration.
/// Weak interference is not required to build it, only to guarantee that its
/// solution is the game's equilibrium.
pub fn build_linear_system(config: &NetworkConfig) -> LinearBestResponseSystem {
    let n = config.num_players();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for k in 0..n {
        let weight = config.beta(k) / (config.alpha() + config.beta(k));
        let own = config.power(k) * config.gain(k, k);
        let mut cross = 0.0;
        for (j, entry) in a[k].iter_mut().enumerate() {
            if j != k {
                let coupling = config.power(j) * config.gain(k, j) / own;
                *entry = -weight * coupling;
                cross += coupling;
            }
        }
        b[k] = weight * (1.0 + cross);
    }
    LinearBestResponseSystem { a, b }
}

/// Computes the unique equilibrium of the weak-interference regime by
/// solving `(I - A) x = b` directly.
///
/// Errors with [`Error::Regime`] when the weak-interference condition fails
/// for any player; callers must then fall back to dynamics or the oracle.
pub fn solve_linear_ne(config: &NetworkConfig) -> Result<StrategyProfile> {
    let flags = weak_interference_holds(config);
    let violators: Vec<usize> = flags
        .iter()
        .enumerate()
        .filter_map(|(k, &ok)| (!ok).then_some(k))
        .collect();
    if !violators.is_empty() {
        return Err(Error::Regime { violators });
    }
    let x = build_linear_system(config).solve()?;
    if x.iter().any(|&v| !(0.0 < v && v < 1.0)) {
        return Err(Error::Internal(format!(
            "linear equilibrium {x:?} escaped the open strategy box"
        )));
    }
    Ok(StrategyProfile::from_computed(x))
}

/// A connected component of near-fixed-point grid hits.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCluster {
    /// Coordinate-wise mean of the member points.
    pub representative: StrategyProfile,
    /// Lower corner of the member bounding box.
    pub min: Vec<f64>,
    /// Upper corner of the member bounding box.
    pub max: Vec<f64>,
    /// Number of member grid points.
    pub size: usize,
}

/// Scans the product grid of step `resolution` and reports every point whose
/// best-response residual is at most `2 * resolution`, clustered into
/// connected components (Chebyshev adjacency at one grid step). Cluster
/// representatives are returned in scan order, which is deterministic.
///
/// An isolated equilibrium appears as one small cluster; a segment of
/// equilibria appears as one elongated cluster whose bounding box covers the
/// segment.
pub fn brute_force_clusters(
    config: &NetworkConfig,
    resolution: f64,
    budget: u128,
) -> Result<Vec<GridCluster>> {
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::validation(format!(
            "resolution: must lie in (0, 1], got {resolution}"
        )));
    }
    let k = config.num_players();
    let n = (1.0 / resolution).round().max(1.0) as usize;
    let points_per_axis = n + 1;
    let total_points = (points_per_axis as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    if total_points > budget {
        return Err(Error::GridBudget {
            points: total_points,
            budget,
        });
    }

    let axis: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let threshold = 2.0 * resolution;

    // Sequential row-major scan (last coordinate fastest). Hits are recorded
    // as integer grid coordinates for exact adjacency tests.
    let mut hits: Vec<Vec<u32>> = Vec::new();
    let mut hit_ids: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut idx = vec![0usize; k];
    let mut x = vec![0.0f64; k];
    'scan: loop {
        for d in 0..k {
            x[d] = axis[idx[d]];
        }
        if best_response_residual(config, &x) <= threshold {
            let coord: Vec<u32> = idx.iter().map(|&i| i as u32).collect();
            hit_ids.insert(coord.clone(), hits.len());
            hits.push(coord);
        }
        // Odometer increment.
        for d in (0..k).rev() {
            idx[d] += 1;
            if idx[d] <= n {
                continue 'scan;
            }
            idx[d] = 0;
        }
        break;
    }

    // Flood-fill connected components in first-hit scan order.
    let mut assigned = vec![false; hits.len()];
    let mut clusters = Vec::new();
    let offsets = neighbor_offsets(k);
    for start in 0..hits.len() {
        if assigned[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut queue = vec![start];
        assigned[start] = true;
        while let Some(h) = queue.pop() {
            members.push(h);
            let base = &hits[h];
            for off in &offsets {
                let mut neighbor = Vec::with_capacity(k);
                let mut valid = true;
                for d in 0..k {
                    let v = base[d] as i64 + off[d] as i64;
                    if v < 0 || v > n as i64 {
                        valid = false;
                        break;
                    }
                    neighbor.push(v as u32);
                }
                if !valid {
                    continue;
                }
                if let Some(&id) = hit_ids.get(&neighbor) {
                    if !assigned[id] {
                        assigned[id] = true;
                        queue.push(id);
                    }
                }
            }
        }
        let mut min = vec![f64::INFINITY; k];
        let mut max = vec![f64::NEG_INFINITY; k];
        let mut mean = vec![0.0; k];
        for &m in &members {
            for d in 0..k {
                let v = axis[hits[m][d] as usize];
                min[d] = min[d].min(v);
                max[d] = max[d].max(v);
                mean[d] += v;
            }
        }
        for v in &mut mean {
            *v /= members.len() as f64;
        }
        clusters.push(GridCluster {
            representative: StrategyProfile::from_computed(mean),
            min,
            max,
            size: members.len(),
        });
    }
    Ok(clusters)
}

fn neighbor_offsets(k: usize) -> Vec<Vec<i8>> {
    let mut offsets = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::with_capacity(offsets.len() * 3);
        for base in &offsets {
            for step in [-1i8, 0, 1] {
                let mut o = base.clone();
                o.push(step);
                next.push(o);
            }
        }
        offsets = next;
    }
    offsets.retain(|o| o.iter().any(|&s| s != 0));
    offsets
}

/// Grid-scan equilibrium oracle: cluster representatives of all approximate
/// best-response fixed points at the given resolution, with the default
/// point budget. Intended for `K <= 3`; the grid has `resolution^-K` points.
pub fn brute_force_ne(config: &NetworkConfig, resolution: f64) -> Result<Vec<StrategyProfile>> {
    Ok(brute_force_clusters(config, resolution, DEFAULT_GRID_BUDGET)?
        .into_iter()
        .map(|c| c.representative)
        .collect())
}

/// Jensen gap of a finite-support mixed strategy for player `k` against
/// fixed opponents: `u_k(E[x_k]) - E[u_k(x_k)]`.
///
/// Strict concavity of `u_k` in `x_k` makes the gap strictly positive
/// whenever the support has nonzero variance, which is what rules out
/// mixed-strategy equilibria.
pub fn mixed_strategy_dominance_gap(
    config: &NetworkConfig,
    k: usize,
    support: &[(f64, f64)],
    opponents: &StrategyProfile,
) -> Result<f64> {
    config.check_player(k)?;
    config.check_profile(opponents)?;
    if support.is_empty() {
        return Err(Error::Distribution("empty support".to_string()));
    }
    let mut total_prob = 0.0;
    for &(value, prob) in support {
        if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
            return Err(Error::Distribution(format!(
                "support value {value} outside [0, 1]"
            )));
        }
        if !(prob.is_finite() && prob >= 0.0) {
            return Err(Error::Distribution(format!(
                "probability {prob} is negative or not finite"
            )));
        }
        total_prob += prob;
    }
    if (total_prob - 1.0).abs() > 1e-9 {
        return Err(Error::Distribution(format!(
            "probabilities sum to {total_prob}, expected 1"
        )));
    }

    let mut x = opponents.as_slice().to_vec();
    let mean: f64 = support.iter().map(|&(v, p)| v * p).sum();
    let mut expected_utility = 0.0;
    for &(value, prob) in support {
        x[k] = value;
        expected_utility += prob * utility_unchecked(config, &x, k);
    }
    x[k] = mean.clamp(0.0, 1.0);
    Ok(utility_unchecked(config, &x, k) - expected_utility)
}
