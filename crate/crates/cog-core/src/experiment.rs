//! Monte Carlo harness: built-in scenarios, seeded trial generation,
//! convergence-step statistics, and empirical CDFs.
//!
//! Reference setup for all built-in scenarios: `alpha = 0.5`,
//! `beta_k = 0.5/K`, `P_k = 1`, `n0 = 1e-2`; dynamics run with tolerance
//! `1e-2` and a budget of 100 updates. AMBRD steps count **individual
//! player updates** (one cycle of a `K`-player game costs `K` steps), which
//! is also the x-axis convention of the step CDFs.
//!
//! # Reproducibility contract
//!
//! Trial `i` of a run with master seed `s` draws its initial profile from a
//! SplitMix64 stream seeded with `s XOR ((i + 1) * 0x9E3779B97F4A7C15)`
//! (wrapping arithmetic). Each coordinate consumes one output, mapped to
//! `[0, 1)` as `(z >> 11) * 2^-53`. The draw depends only on `(s, i)`, so
//! trials can run in any order or in parallel without changing results.

use rayon::prelude::*;

use crate::config::{NetworkConfig, StrategyProfile};
use crate::dynamics::{run_ambrd, run_smbrd, Outcome, RunOptions};
use crate::equilibrium::TwoPlayerKind;
use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Deterministic counter-based generator behind every Monte Carlo draw.
/// The sequence is part of the repository's documented contract.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Initial strategy profile of trial `trial` under master seed `seed`:
/// uniform on `[0, 1)^K`, derived from `(seed, trial)` alone.
pub fn initial_profile(seed: u64, trial: u64, num_players: usize) -> StrategyProfile {
    let mut rng = SplitMix64::new(seed ^ trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    StrategyProfile::from_computed((0..num_players).map(|_| rng.next_f64()).collect())
}

/// Which learning dynamic a run uses. Alternating runs update players in
/// the canonical order `0..K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicKind {
    Simultaneous,
    Alternating,
}

impl DynamicKind {
    pub fn name(&self) -> &'static str {
        match self {
            DynamicKind::Simultaneous => "smbrd",
            DynamicKind::Alternating => "ambrd",
        }
    }
}

/// Qualitative interference level of a multi-player scenario, according to
/// how many players satisfy the weak-interference condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterferenceLevel {
    /// Satisfied for all players.
    Weak,
    /// Satisfied for all but one player.
    Medium,
    /// Unsatisfied for all players.
    Strong,
}

/// What a scenario is expected to exhibit, when known in advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    TwoPlayer(TwoPlayerKind),
    Interference(InterferenceLevel),
}

/// Where a scenario comes from. Built-in reference scenarios are immutable
/// and pin the reference parameters exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Built-in catalog scenario.
    Reference,
    /// Loaded from a user-supplied file.
    User,
}

/// A named game configuration with its expected behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub config: NetworkConfig,
    pub expected: Option<Expectation>,
    pub provenance: Provenance,
}

fn two_player_scenario(name: &str, c12: f64, c21: f64, kind: TwoPlayerKind) -> Scenario {
    Scenario {
        name: name.to_string(),
        config: NetworkConfig::new(
            0.5,
            vec![0.25, 0.25],
            vec![1.0, 1.0],
            vec![vec![1.0, c21], vec![c12, 1.0]],
            0.01,
        )
        .expect("catalog config is valid"),
        expected: Some(Expectation::TwoPlayer(kind)),
        provenance: Provenance::Reference,
    }
}

fn four_player_scenario(name: &str, gain: [[f64; 4]; 4], level: InterferenceLevel) -> Scenario {
    Scenario {
        name: name.to_string(),
        config: NetworkConfig::new(
            0.5,
            vec![0.125; 4],
            vec![1.0; 4],
            gain.iter().map(|row| row.to_vec()).collect(),
            0.01,
        )
        .expect("catalog config is valid"),
        expected: Some(Expectation::Interference(level)),
        provenance: Provenance::Reference,
    }
}

/// The seven built-in scenarios: four 2-player games spanning the unique /
/// two / three / infinite equilibrium cases (gain-ratio pairs (0.4, 0.6),
/// (3, 4), (3.5, 4), (3, 3) with unit diagonals), and three 4-player games
/// with the weak / medium / strong interference matrices.
pub fn catalog() -> Vec<Scenario> {
    vec![
        two_player_scenario("2p-unique", 0.4, 0.6, TwoPlayerKind::UniqueInterior),
        two_player_scenario("2p-two", 3.0, 4.0, TwoPlayerKind::TwoSingular),
        two_player_scenario("2p-three", 3.5, 4.0, TwoPlayerKind::Three),
        two_player_scenario("2p-infinite", 3.0, 3.0, TwoPlayerKind::InfiniteSegment),
        four_player_scenario(
            "4p-weak",
            [
                [1.0, 0.2, 0.1, 0.4],
                [0.4, 1.0, 0.5, 0.3],
                [0.3, 0.4, 1.0, 0.6],
                [0.4, 0.2, 0.5, 1.0],
            ],
            InterferenceLevel::Weak,
        ),
        four_player_scenario(
            "4p-medium",
            [
                [1.0, 0.6, 1.4, 1.6],
                [1.4, 1.0, 0.9, 1.4],
                [2.3, 1.4, 1.0, 2.0],
                [0.9, 0.7, 1.4, 1.0],
            ],
            InterferenceLevel::Medium,
        ),
        four_player_scenario(
            "4p-strong",
            [
                [1.0, 1.4, 2.0, 0.9],
                [0.4, 1.0, 1.6, 2.1],
                [1.4, 2.2, 1.0, 0.9],
                [1.2, 2.1, 3.0, 1.0],
            ],
            InterferenceLevel::Strong,
        ),
    ]
}

/// Looks up a built-in scenario by name.
pub fn find_scenario(name: &str) -> Option<Scenario> {
    catalog().into_iter().find(|s| s.name == name)
}

/// How a single trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOutcome {
    Converged,
    Cycled,
    Exhausted,
}

impl TrialOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            TrialOutcome::Converged => "converged",
            TrialOutcome::Cycled => "cycled",
            TrialOutcome::Exhausted => "exhausted",
        }
    }
}

/// One Monte Carlo trial: the seeded initial profile and how the run ended.
/// `steps` is `None` for non-converged trials (steps-to-convergence is
/// infinite; such trials are absent from the CDF).
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub x0: StrategyProfile,
    pub outcome: TrialOutcome,
    pub steps: Option<usize>,
}

/// A point of the empirical CDF of steps-to-convergence: the fraction of
/// all trials that converged within `steps` updates.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfPoint {
    pub steps: usize,
    pub fraction: f64,
}

/// Aggregated outcome of a Monte Carlo sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub scenario: String,
    pub dynamic: DynamicKind,
    pub trials: u64,
    pub seed: u64,
    pub records: Vec<TrialRecord>,
    /// Nondecreasing in both coordinates; the last fraction equals
    /// `fraction_converged`.
    pub cdf: Vec<CdfPoint>,
    pub fraction_converged: f64,
    pub fraction_cycled: f64,
    pub fraction_exhausted: f64,
}

/// Runs `trials` independent trials of the chosen dynamic on a scenario,
/// drawing each initial profile from the documented `(seed, trial)`
/// generator. Trials run in parallel; records are keyed by trial index, so
/// the result is identical to a sequential sweep.
pub fn monte_carlo(
    scenario: &Scenario,
    dynamic: DynamicKind,
    trials: u64,
    seed: u64,
    options: &RunOptions,
) -> Result<ExperimentResult> {
    if trials == 0 {
        return Err(Error::validation("trials: must be >= 1"));
    }
    options_run_probe(scenario, dynamic, options)?;

    let k = scenario.config.num_players();
    let order: Vec<usize> = (0..k).collect();
    let run_options = RunOptions {
        // Trial records carry only (x0, outcome, steps); no need to keep
        // full histories for thousands of runs.
        retain_full_history: false,
        ..options.clone()
    };

    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let x0 = initial_profile(seed, trial, k);
            let trace = match dynamic {
                DynamicKind::Simultaneous => run_smbrd(&scenario.config, &x0, &run_options),
                DynamicKind::Alternating => {
                    run_ambrd(&scenario.config, &x0, &order, &run_options)
                }
            }
            .expect("validated inputs");
            let (outcome, steps) = match trace.outcome {
                Outcome::Converged { steps, .. } => (TrialOutcome::Converged, Some(steps)),
                Outcome::Cycled { .. } => (TrialOutcome::Cycled, None),
                Outcome::Exhausted { .. } => (TrialOutcome::Exhausted, None),
            };
            TrialRecord {
                trial,
                x0,
                outcome,
                steps,
            }
        })
        .collect();

    let total = trials as f64;
    let fraction_converged =
        records.iter().filter(|r| r.outcome == TrialOutcome::Converged).count() as f64 / total;
    let fraction_cycled =
        records.iter().filter(|r| r.outcome == TrialOutcome::Cycled).count() as f64 / total;
    let fraction_exhausted =
        records.iter().filter(|r| r.outcome == TrialOutcome::Exhausted).count() as f64 / total;

    let mut converged_steps: Vec<usize> = records.iter().filter_map(|r| r.steps).collect();
    converged_steps.sort_unstable();
    let mut cdf = Vec::new();
    let mut seen = 0usize;
    let mut i = 0;
    while i < converged_steps.len() {
        let s = converged_steps[i];
        while i < converged_steps.len() && converged_steps[i] == s {
            seen += 1;
            i += 1;
        }
        cdf.push(CdfPoint {
            steps: s,
            fraction: seen as f64 / total,
        });
    }

    Ok(ExperimentResult {
        scenario: scenario.name.clone(),
        dynamic,
        trials,
        seed,
        records,
        cdf,
        fraction_converged,
        fraction_cycled,
        fraction_exhausted,
    })
}

/// Runs one throwaway step so that invalid options or configs surface as
/// errors before the parallel sweep starts.
fn options_run_probe(
    scenario: &Scenario,
    dynamic: DynamicKind,
    options: &RunOptions,
) -> Result<()> {
    let k = scenario.config.num_players();
    let x0 = initial_profile(0, 0, k);
    let probe = RunOptions {
        max_steps: 1,
        ..options.clone()
    };
    match dynamic {
        DynamicKind::Simultaneous => run_smbrd(&scenario.config, &x0, &probe).map(|_| ()),
        DynamicKind::Alternating => {
            let order: Vec<usize> = (0..k).collect();
            run_ambrd(&scenario.config, &x0, &order, &probe).map(|_| ())
        }
    }
}

/// Pointwise order between two step CDFs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfDominance {
    /// The first CDF is everywhere at least the second (first converges
    /// stochastically faster).
    FirstDominates,
    /// The second CDF is everywhere at least the first.
    SecondDominates,
    /// The CDFs are identical on every step.
    Equal,
    /// The CDFs cross.
    Incomparable,
}

/// Speed comparison between two sweeps of the same scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedComparison {
    /// Median steps-to-convergence among converged trials (even counts
    /// average the two middle values); `None` when nothing converged.
    pub median_steps_a: Option<f64>,
    pub median_steps_b: Option<f64>,
    pub dominance: CdfDominance,
}

/// Compares convergence speed of two results for the same scenario and
/// trial count: median steps among converged trials plus a pointwise
/// stochastic-dominance check of the CDFs.
pub fn compare_speed(a: &ExperimentResult, b: &ExperimentResult) -> Result<SpeedComparison> {
    if a.scenario != b.scenario {
        return Err(Error::Comparison(format!(
            "different scenarios: {} vs {}",
            a.scenario, b.scenario
        )));
    }
    if a.trials != b.trials {
        return Err(Error::Comparison(format!(
            "different trial counts: {} vs {}",
            a.trials, b.trials
        )));
    }
    Ok(SpeedComparison {
        median_steps_a: median_converged_steps(a),
        median_steps_b: median_converged_steps(b),
        dominance: cdf_dominance(a, b),
    })
}

fn median_converged_steps(result: &ExperimentResult) -> Option<f64> {
    let mut steps: Vec<usize> = result.records.iter().filter_map(|r| r.steps).collect();
    if steps.is_empty() {
        return None;
    }
    steps.sort_unstable();
    let n = steps.len();
    Some(if n % 2 == 1 {
        steps[n / 2] as f64
    } else {
        (steps[n / 2 - 1] + steps[n / 2]) as f64 / 2.0
    })
}

fn cdf_at(cdf: &[CdfPoint], steps: usize) -> f64 {
    match cdf.binary_search_by_key(&steps, |p| p.steps) {
        Ok(i) => cdf[i].fraction,
        Err(0) => 0.0,
        Err(i) => cdf[i - 1].fraction,
    }
}

fn cdf_dominance(a: &ExperimentResult, b: &ExperimentResult) -> CdfDominance {
    let mut grid: Vec<usize> = a
        .cdf
        .iter()
        .chain(b.cdf.iter())
        .map(|p| p.steps)
        .collect();
    grid.sort_unstable();
    grid.dedup();
    let mut a_ge = true;
    let mut b_ge = true;
    for &s in &grid {
        let fa = cdf_at(&a.cdf, s);
        let fb = cdf_at(&b.cdf, s);
        if fa < fb {
            a_ge = false;
        }
        if fb < fa {
            b_ge = false;
        }
    }
    match (a_ge, b_ge) {
        (true, true) => CdfDominance::Equal,
        (true, false) => CdfDominance::FirstDominates,
        (false, true) => CdfDominance::SecondDominates,
        (false, false) => CdfDominance::Incomparable,
    }
}
