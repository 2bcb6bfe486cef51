//! Best-response learning dynamics.
//!
//! Two distributed schedules are implemented:
//!
//! * **SMBRD** (simultaneous-move): every player best-responds to the same
//!   snapshot of the previous profile, `x(t+1) = BR(x(t))`;
//! * **AMBRD** (alternating-move): players revise one at a time in a fixed
//!   round-robin order, each measuring the profile immediately before its
//!   own update.
//!
//! Updates are computed from the interference form of the best response;
//! the SIR is available separately for diagnostics (see
//! [`crate::game::player_view`]).
//!
//! A run stops as **converged** when the published criterion holds: for
//! SMBRD, `max_k |x_k(t+1) - x_k(t)| <= tol`; for AMBRD, the same bound
//! over a full update cycle, `max_k |x_k(t+j) - x_k(t+j-K)| <= tol` for
//! every offset `j = 1..K`. AMBRD steps count individual player updates,
//! so one cycle costs `K` steps of the budget. A run that exhausts its
//! budget is scanned for a trailing cycle before being declared exhausted;
//! when both a tolerance-sized cycle and the convergence criterion could
//! fire, convergence wins.
//!
//! Runs are single-threaded and deterministic: identical inputs produce
//! bitwise-identical traces.

use crate::config::{NetworkConfig, StrategyProfile};
use crate::error::{Error, Result};
use crate::game::best_response_unchecked;

/// Update schedule of a dynamics run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// All players update at once from the same snapshot.
    Simultaneous,
    /// Players update one at a time in this repeating order.
    Alternating(Vec<usize>),
}

/// Terminal state of a dynamics run.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// The stopping criterion fired after `steps` updates.
    Converged {
        fixed_point: StrategyProfile,
        steps: usize,
    },
    /// The trailing states repeat with the given period.
    Cycled {
        period: usize,
        cycle_states: Vec<StrategyProfile>,
    },
    /// Budget spent without convergence or a detected cycle.
    Exhausted { max_steps: usize },
}

/// Time-indexed strategy sequence produced by a run.
///
/// `states[0]` is the initial profile; `states[t]` is the profile after `t`
/// updates (for SMBRD one update revises every coordinate, for AMBRD exactly
/// one). With capped retention only `states[0]` plus a trailing window
/// survive.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrace {
    pub schedule: Schedule,
    pub states: Vec<StrategyProfile>,
    pub outcome: Outcome,
}

/// Tuning knobs for a dynamics run. Defaults follow the reference
/// experimental setup: tolerance `1e-2`, at most `100` updates, cycle
/// detection up to period `4`, full state retention.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Convergence tolerance.
    pub tol: f64,
    /// Update budget (individual player updates for AMBRD).
    pub max_steps: usize,
    /// Largest cycle period searched before declaring exhaustion.
    pub max_cycle_period: usize,
    /// When false, the returned trace keeps only the initial state plus the
    /// trailing `2 * max_cycle_period + 1` states.
    pub retain_full_history: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            tol: 1e-2,
            max_steps: 100,
            max_cycle_period: 4,
            retain_full_history: true,
        }
    }
}

impl RunOptions {
    fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::validation(format!(
                "tol: must be > 0, got {}",
                self.tol
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::validation("max_steps: must be >= 1"));
        }
        if self.max_cycle_period < 2 {
            return Err(Error::validation("max_cycle_period: must be >= 2"));
        }
        Ok(())
    }
}

/// One simultaneous update: every coordinate is replaced by that player's
/// best response to the same input profile.
pub fn smbrd_step(config: &NetworkConfig, profile: &StrategyProfile) -> Result<StrategyProfile> {
    config.check_profile(profile)?;
    Ok(smbrd_step_unchecked(config, profile))
}

fn smbrd_step_unchecked(config: &NetworkConfig, profile: &StrategyProfile) -> StrategyProfile {
    let x = profile.as_slice();
    let next = (0..config.num_players())
        .map(|k| best_response_unchecked(config, x, k))
        .collect();
    StrategyProfile::from_computed(next)
}

/// One alternating update: only coordinate `k` changes, to player `k`'s best
/// response against the current (partially updated) profile.
pub fn ambrd_step(
    config: &NetworkConfig,
    profile: &StrategyProfile,
    k: usize,
) -> Result<StrategyProfile> {
    config.check_player(k)?;
    config.check_profile(profile)?;
    let mut next = profile.as_slice().to_vec();
    next[k] = best_response_unchecked(config, &next, k);
    Ok(StrategyProfile::from_computed(next))
}

fn max_delta(a: &StrategyProfile, b: &StrategyProfile) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Runs the simultaneous-move dynamic from `x0`.
pub fn run_smbrd(
    config: &NetworkConfig,
    x0: &StrategyProfile,
    options: &RunOptions,
) -> Result<DynamicsTrace> {
    config.check_profile(x0)?;
    options.validate()?;

    let mut states = Vec::with_capacity(options.max_steps + 1);
    states.push(x0.clone());
    for step in 1..=options.max_steps {
        let next = smbrd_step_unchecked(config, &states[step - 1]);
        let delta = max_delta(&next, &states[step - 1]);
        states.push(next);
        if delta <= options.tol {
            let fixed_point = states[step].clone();
            return Ok(finish(
                Schedule::Simultaneous,
                states,
                Outcome::Converged {
                    fixed_point,
                    steps: step,
                },
                options,
            ));
        }
    }
    let outcome = exhausted_outcome(&states, options);
    Ok(finish(Schedule::Simultaneous, states, outcome, options))
}

/// Runs the alternating-move dynamic from `x0` with the given repeating
/// update order (use `0..K` for the canonical schedule; any permutation is
/// accepted). `max_steps` counts individual player updates.
pub fn run_ambrd(
    config: &NetworkConfig,
    x0: &StrategyProfile,
    order: &[usize],
    options: &RunOptions,
) -> Result<DynamicsTrace> {
    config.check_profile(x0)?;
    options.validate()?;
    let k = config.num_players();
    validate_order(order, k)?;

    let mut states = Vec::with_capacity(options.max_steps + 1);
    states.push(x0.clone());
    for step in 1..=options.max_steps {
        let player = order[(step - 1) % k];
        let next = ambrd_step(config, &states[step - 1], player)?;
        states.push(next);

        // Full-cycle criterion at cycle boundaries: every state of the last
        // cycle is within tol of the state one cycle earlier. References
        // before the start resolve to x0, since no one had updated yet.
        if step % k == 0 {
            let converged = (step - k + 1..=step).all(|t| {
                let earlier = if t >= k { &states[t - k] } else { &states[0] };
                max_delta(&states[t], earlier) <= options.tol
            });
            if converged {
                let fixed_point = states[step].clone();
                return Ok(finish(
                    Schedule::Alternating(order.to_vec()),
                    states,
                    Outcome::Converged {
                        fixed_point,
                        steps: step,
                    },
                    options,
                ));
            }
        }
    }
    let outcome = exhausted_outcome(&states, options);
    Ok(finish(
        Schedule::Alternating(order.to_vec()),
        states,
        outcome,
        options,
    ))
}

fn validate_order(order: &[usize], num_players: usize) -> Result<()> {
    if order.len() != num_players {
        return Err(Error::LengthMismatch {
            what: "update order",
            expected: num_players,
            actual: order.len(),
        });
    }
    let mut seen = vec![false; num_players];
    for &p in order {
        if p >= num_players || seen[p] {
            return Err(Error::validation(format!(
                "update order {order:?} is not a permutation of 0..{num_players}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

fn exhausted_outcome(states: &[StrategyProfile], options: &RunOptions) -> Outcome {
    if states.len() >= 2 * options.max_cycle_period {
        if let Some((period, cycle_states)) =
            detect_cycle(states, options.max_cycle_period, options.tol)
                .expect("history length checked above")
        {
            return Outcome::Cycled {
                period,
                cycle_states,
            };
        }
    }
    Outcome::Exhausted {
        max_steps: states.len() - 1,
    }
}

fn finish(
    schedule: Schedule,
    mut states: Vec<StrategyProfile>,
    outcome: Outcome,
    options: &RunOptions,
) -> DynamicsTrace {
    if !options.retain_full_history {
        let window = 2 * options.max_cycle_period + 1;
        if states.len() > window + 1 {
            let tail_start = states.len() - window;
            let mut trimmed = Vec::with_capacity(window + 1);
            trimmed.push(states[0].clone());
            trimmed.extend_from_slice(&states[tail_start..]);
            states = trimmed;
        }
    }
    DynamicsTrace {
        schedule,
        states,
        outcome,
    }
}

/// Searches the tail of `states` for the smallest period `p` in
/// `[2, max_period]` such that `x(t)` matches `x(t-p)` within `tol` across
/// the trailing `2p` states. A constant tail is not a cycle (period 1 is
/// convergence, handled by the run loops) and reports `None`.
///
/// Requires at least `2 * max_period` states.
pub fn detect_cycle(
    states: &[StrategyProfile],
    max_period: usize,
    tol: f64,
) -> Result<Option<(usize, Vec<StrategyProfile>)>> {
    if max_period < 2 {
        return Err(Error::validation("max_period: must be >= 2"));
    }
    let n = states.len();
    if n < 2 * max_period {
        return Err(Error::InsufficientHistory {
            required: 2 * max_period,
            actual: n,
        });
    }
    for period in 2..=max_period {
        let repeats = (n - period..n).all(|t| max_delta(&states[t], &states[t - period]) <= tol);
        if !repeats {
            continue;
        }
        let moves = (n - period..n).any(|t| max_delta(&states[t], &states[t - 1]) > tol);
        if moves {
            return Ok(Some((period, states[n - period..].to_vec())));
        }
    }
    Ok(None)
}

/// One decomposed subsequence of a two-player simultaneous trace: pairs of
/// (even-step value of one player, odd-step value of the other).
pub type Subsequence = Vec<(f64, f64)>;

/// Splits a two-player simultaneous trace into its two independent
/// subsequences: the first pairs `(x_1(2i), x_2(2i+1))`, the second
/// `(x_2(2i), x_1(2i+1))`. Each evolves on its own - the first is fully
/// determined by `x_1(0)`, the second by `x_2(0)` - so the joint dynamic
/// converges exactly when both limits coincide, and cycles between them
/// otherwise.
pub fn two_player_subsequences(trace: &DynamicsTrace) -> Result<(Subsequence, Subsequence)> {
    if trace.schedule != Schedule::Simultaneous {
        return Err(Error::validation(
            "subsequence decomposition requires the simultaneous schedule",
        ));
    }
    let k = trace.states.first().map_or(0, |s| s.len());
    if k != 2 {
        return Err(Error::Dimension {
            required: 2,
            actual: k,
        });
    }
    let mut seq_a = Vec::new();
    let mut seq_b = Vec::new();
    let mut i = 0;
    while i + 1 < trace.states.len() {
        seq_a.push((trace.states[i][0], trace.states[i + 1][1]));
        seq_b.push((trace.states[i][1], trace.states[i + 1][0]));
        i += 2;
    }
    Ok((seq_a, seq_b))
}
