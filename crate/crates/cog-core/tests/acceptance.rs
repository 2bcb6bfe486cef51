//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them).

mod common;

use std::time::Instant;

use common::*;

use cog_core::dynamics::{run_ambrd, run_smbrd, Outcome, RunOptions};
use cog_core::equilibrium::{
    brute_force_clusters, build_linear_system, classify_two_player,
    mixed_strategy_dominance_gap, solve_linear_ne, verify_ne, weak_interference_holds,
    TwoPlayerClass, TwoPlayerKind, DEFAULT_GRID_BUDGET,
};
use cog_core::experiment::{
    catalog, compare_speed, find_scenario, initial_profile, monte_carlo, DynamicKind,
};
use cog_core::game::{best_response, utility, utility_derivative};
use cog_core::{NetworkConfig, StrategyProfile};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20120915;

fn reference_two_player(c12: f64, c21: f64) -> NetworkConfig {
    NetworkConfig::new(
        0.5,
        vec![0.25, 0.25],
        vec![1.0, 1.0],
        vec![vec![1.0, c21], vec![c12, 1.0]],
        0.01,
    )
    .unwrap()
}

/// Criterion 1: the four reference ratio pairs classify as unique / two /
/// three / infinitely-many equilibria, exactly.
#[test]
fn criterion_1_two_player_classification_labels() {
    let cases = [
        ((0.4, 0.6), TwoPlayerKind::UniqueInterior),
        ((3.0, 4.0), TwoPlayerKind::TwoSingular),
        ((3.5, 4.0), TwoPlayerKind::Three),
        ((3.0, 3.0), TwoPlayerKind::InfiniteSegment),
    ];
    for ((c12, c21), expected) in cases {
        let class = classify_two_player(&reference_two_player(c12, c21)).unwrap();
        assert_eq!(class.kind, expected, "ratio pair ({c12}, {c21})");
    }
    println!("acceptance criterion 1 (two-player classification labels): PASS");
}

fn assert_oracle_agrees(config: &NetworkConfig, class: &TwoPlayerClass, label: &str) {
    let resolution = 1e-3;
    let clusters = brute_force_clusters(config, resolution, DEFAULT_GRID_BUDGET).unwrap();
    if class.kind == TwoPlayerKind::InfiniteSegment {
        // Count agreement does not apply here; the oracle's hit band must
        // instead reach both segment endpoints, and every cluster must sit
        // on the equilibrium segment.
        let segment = class.segment.as_ref().unwrap();
        for endpoint in [&segment.start, &segment.end] {
            let covered = clusters.iter().any(|band| {
                (0..2).all(|d| {
                    endpoint[d] >= band.min[d] - 5e-3 && endpoint[d] <= band.max[d] + 5e-3
                })
            });
            assert!(covered, "{label}: endpoint {endpoint:?} not covered\n{clusters:?}");
        }
        for cluster in &clusters {
            assert!(
                verify_ne(config, &cluster.representative, 1e-2).unwrap(),
                "{label}: cluster off the segment: {cluster:?}"
            );
        }
        return;
    }
    assert_eq!(
        clusters.len(),
        class.equilibria.len(),
        "{label}: cluster count mismatch\nclusters {clusters:?}\nclassified {:?}",
        class.equilibria
    );
    for ne in &class.equilibria {
        let matched = clusters.iter().any(|c| {
            (0..2).all(|d| (c.representative[d] - ne[d]).abs() <= 5e-3)
        });
        assert!(matched, "{label}: no cluster near {ne:?}\n{clusters:?}");
    }
}

/// Criterion 2: closed-form classification and the grid oracle agree in
/// count and location on 200 seeded two-player games, in under a minute.
#[test]
fn criterion_2_oracle_equivalence_on_200_random_games() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for trial in 0..200 {
        // Mostly generic draws, plus constructed double-threshold games so
        // the infinite-segment carve-out is exercised.
        let config = if trial % 20 == 19 {
            two_player_with_margins(&mut rng, 1.0, 1.0)
        } else {
            random_two_player_for_oracle(&mut rng)
        };
        let class = classify_two_player(&config).unwrap();
        assert_oracle_agrees(&config, &class, &format!("trial {trial} ({:?})", class.kind));
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "oracle sweep took {elapsed:?}, budget is one minute"
    );
    println!(
        "acceptance criterion 2 (oracle equivalence, 200 games in {:.1}s): PASS",
        elapsed.as_secs_f64()
    );
}

/// Criterion 3: AMBRD converges on 100% of 1000 uniform trials on every
/// two-player scenario; SMBRD does so only on the unique-equilibrium
/// scenario and cycles from the known cycling regions of the others.
#[test]
fn criterion_3_two_player_convergence_and_cycling() {
    let options = RunOptions::default();
    for name in ["2p-unique", "2p-two", "2p-three", "2p-infinite"] {
        let scenario = find_scenario(name).unwrap();
        let ambrd =
            monte_carlo(&scenario, DynamicKind::Alternating, 1000, SEED, &options).unwrap();
        assert_eq!(ambrd.fraction_converged, 1.0, "{name} under AMBRD");

        let smbrd =
            monte_carlo(&scenario, DynamicKind::Simultaneous, 1000, SEED, &options).unwrap();
        if name == "2p-unique" {
            assert_eq!(smbrd.fraction_converged, 1.0, "{name} under SMBRD");
        } else {
            assert!(
                smbrd.fraction_converged < 1.0,
                "{name} under SMBRD: fraction_converged = {}",
                smbrd.fraction_converged
            );
            assert!(smbrd.fraction_cycled > 0.0, "{name} under SMBRD");
        }
    }

    // Cycling regions, from the two-subsequence analysis. Points are
    // sampled with a margin from the region boundaries.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let expect_cycle = |config: &NetworkConfig, x0: StrategyProfile, label: &str| {
        let trace = run_smbrd(config, &x0, &options).unwrap();
        match trace.outcome {
            Outcome::Cycled { period: 2, .. } => {}
            other => panic!("{label} from {:?}: expected a period-2 cycle, got {other:?}",
                            x0.as_slice()),
        }
    };

    // Two equilibria (ratio pair (3, 4)): the interior intersection sits at
    // (f1(1), 1) = (1/3, 1); starts left of it that do not begin at x2 = 1
    // split the subsequences across the two equilibria.
    let two = reference_two_player(3.0, 4.0);
    for _ in 0..50 {
        let x0 = StrategyProfile::new(vec![
            rng.gen_range(0.02..1.0 / 3.0 - 0.05),
            rng.gen_range(0.02..0.95),
        ])
        .unwrap();
        expect_cycle(&two, x0, "2p-two");
    }

    // Three equilibria (ratio pair (3.5, 4)): interior point (0.6, 0.8);
    // cycling when both coordinates start on the same side of it.
    let three = reference_two_player(3.5, 4.0);
    for _ in 0..25 {
        let x0 = StrategyProfile::new(vec![
            rng.gen_range(0.02..0.55),
            rng.gen_range(0.02..0.75),
        ])
        .unwrap();
        expect_cycle(&three, x0, "2p-three below-below");
        let x0 = StrategyProfile::new(vec![
            rng.gen_range(0.65..0.98),
            rng.gen_range(0.85..0.98),
        ])
        .unwrap();
        expect_cycle(&three, x0, "2p-three above-above");
    }

    // Infinite segment (ratio pair (3, 3)): both best responses clamp from
    // starts below (1/3, 1/3), and interior starts off the equilibrium line
    // x1 + x2 = 4/3 bounce between their two images.
    let infinite = reference_two_player(3.0, 3.0);
    for _ in 0..25 {
        let x0 = StrategyProfile::new(vec![
            rng.gen_range(0.02..1.0 / 3.0 - 0.05),
            rng.gen_range(0.02..1.0 / 3.0 - 0.05),
        ])
        .unwrap();
        expect_cycle(&infinite, x0, "2p-infinite region III");
        let x1: f64 = rng.gen_range(0.4..0.95);
        let off: f64 = rng.gen_range(0.05..0.2);
        let x2 = (4.0 / 3.0 - x1 + off).min(0.99);
        expect_cycle(
            &infinite,
            StrategyProfile::new(vec![x1, x2]).unwrap(),
            "2p-infinite off-line",
        );
    }
    println!("acceptance criterion 3 (AMBRD always converges, SMBRD cycles as analyzed): PASS");
}

/// Criterion 4: weak-interference four-player scenario - condition flags,
/// spectral bound, solver residual, and convergence of both dynamics from
/// 1000 random starts to the unique equilibrium.
#[test]
fn criterion_4_linear_regime_reproduction() {
    let scenario = find_scenario("4p-weak").unwrap();
    let config = &scenario.config;

    assert!(weak_interference_holds(config).iter().all(|&ok| ok));
    let system = build_linear_system(config);
    assert!(system.gershgorin_bound() < 1.0);
    let star = solve_linear_ne(config).unwrap();
    assert!(system.fixed_point_residual(star.as_slice()) <= 1e-10);

    let options = RunOptions::default();
    let order = [0, 1, 2, 3];
    for trial in 0..1000u64 {
        let x0 = initial_profile(SEED, trial, 4);
        for alternating in [false, true] {
            let trace = if alternating {
                run_ambrd(config, &x0, &order, &options).unwrap()
            } else {
                run_smbrd(config, &x0, &options).unwrap()
            };
            match &trace.outcome {
                Outcome::Converged { fixed_point, steps } => {
                    assert!(*steps <= 100);
                    let dist = fixed_point
                        .as_slice()
                        .iter()
                        .zip(star.as_slice())
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    assert!(
                        dist <= 1e-2,
                        "trial {trial} alternating={alternating}: endpoint {dist} from x*"
                    );
                }
                other => panic!("trial {trial} alternating={alternating}: {other:?}"),
            }
        }
    }
    println!("acceptance criterion 4 (weak-interference linear regime): PASS");
}

/// Criterion 5: convergence-speed ordering - SMBRD is faster under weak
/// interference, AMBRD under strong (medians among converged trials,
/// 1000 trials each).
#[test]
fn criterion_5_speed_ordering() {
    let options = RunOptions::default();

    let weak = find_scenario("4p-weak").unwrap();
    let sm = monte_carlo(&weak, DynamicKind::Simultaneous, 1000, SEED, &options).unwrap();
    let am = monte_carlo(&weak, DynamicKind::Alternating, 1000, SEED, &options).unwrap();
    let cmp = compare_speed(&sm, &am).unwrap();
    let (sm_median, am_median) = (cmp.median_steps_a.unwrap(), cmp.median_steps_b.unwrap());
    assert!(
        sm_median < am_median,
        "4p-weak: SMBRD median {sm_median} vs AMBRD median {am_median}"
    );

    let strong = find_scenario("4p-strong").unwrap();
    let sm = monte_carlo(&strong, DynamicKind::Simultaneous, 1000, SEED, &options).unwrap();
    let am = monte_carlo(&strong, DynamicKind::Alternating, 1000, SEED, &options).unwrap();
    let cmp = compare_speed(&sm, &am).unwrap();
    let (sm_median, am_median) = (cmp.median_steps_a.unwrap(), cmp.median_steps_b.unwrap());
    assert!(
        am_median < sm_median,
        "4p-strong: AMBRD median {am_median} vs SMBRD median {sm_median}"
    );
    println!("acceptance criterion 5 (speed ordering weak/strong): PASS");
}

/// Criterion 6: property suites at their stated sizes - concavity and
/// derivative checks on 1000 instances, best-response range/monotonicity/
/// optimality, strict Jensen dominance on 100 supports, and the two-player
/// geometric subsequence law at 1e-12.
#[test]
fn criterion_6_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);

    // Concavity (chord test) and closed-form derivative vs central finite
    // differences, 1000 random instances each.
    for _ in 0..1000 {
        let k = rng.gen_range(1..=4);
        let cfg = random_config(&mut rng, k);
        let p = rng.gen_range(0..k);
        let base = random_interior_profile(&mut rng, k, 0.01);
        let eval = |v: f64| {
            let mut x = base.as_slice().to_vec();
            x[p] = v;
            utility(&cfg, &StrategyProfile::new(x).unwrap(), p).unwrap()
        };
        let a = rng.gen_range(0.0..0.5);
        let c = rng.gen_range(a + 0.2..1.0);
        let b = rng.gen_range(a + 0.05..c - 0.05);
        let chord = eval(a) + (eval(c) - eval(a)) * (b - a) / (c - a);
        assert!(eval(b) >= chord - 1e-12, "concavity chord test");

        let h = 1e-6;
        let fd = (eval(base[p] + h) - eval(base[p] - h)) / (2.0 * h);
        let analytic = utility_derivative(&cfg, &base, p).unwrap();
        assert!(
            (analytic - fd).abs() <= 1e-5,
            "derivative {analytic} vs finite difference {fd}"
        );
    }

    // Best-response range, monotonicity in each opponent, and optimality
    // against a 10^4-point grid.
    for _ in 0..200 {
        let k = rng.gen_range(2..=4);
        let cfg = random_config(&mut rng, k);
        let p = rng.gen_range(0..k);
        let x = random_interior_profile(&mut rng, k, 1e-9);
        let br = best_response(&cfg, &x, p).unwrap();
        let lower = cfg.beta(p) / (cfg.alpha() + cfg.beta(p));
        assert!(br >= lower - 1e-15 && br <= 1.0);
        for j in 0..k {
            if j == p {
                continue;
            }
            let mut raised = x.as_slice().to_vec();
            raised[j] = (raised[j] + 0.3).min(1.0);
            let br_raised =
                best_response(&cfg, &StrategyProfile::new(raised).unwrap(), p).unwrap();
            assert!(br_raised <= br + 1e-15, "monotonicity in opponent {j}");
        }
    }
    for _ in 0..20 {
        let k = rng.gen_range(1..=3);
        let cfg = random_config(&mut rng, k);
        let p = rng.gen_range(0..k);
        let x = random_interior_profile(&mut rng, k, 1e-9);
        let br = best_response(&cfg, &x, p).unwrap();
        let mut probe = x.as_slice().to_vec();
        probe[p] = br;
        let u_star = utility(&cfg, &StrategyProfile::new(probe.clone()).unwrap(), p).unwrap();
        for i in 0..=10_000 {
            probe[p] = i as f64 / 10_000.0;
            let u = utility(&cfg, &StrategyProfile::new(probe.clone()).unwrap(), p).unwrap();
            assert!(u_star >= u - 1e-12, "optimality at grid point {}", probe[p]);
        }
    }

    // Strict Jensen dominance gap on 100 nonzero-variance supports.
    for _ in 0..100 {
        let k = rng.gen_range(2..=3);
        let cfg = random_config(&mut rng, k);
        let p = rng.gen_range(0..k);
        let opponents = random_interior_profile(&mut rng, k, 1e-9);
        let lo = rng.gen_range(0.0..0.45);
        let hi = rng.gen_range(lo + 0.1..1.0);
        let w = rng.gen_range(0.2..0.8);
        let support = [(lo, w), (hi, 1.0 - w)];
        let gap = mixed_strategy_dominance_gap(&cfg, p, &support, &opponents).unwrap();
        assert!(gap > 0.0, "Jensen gap {gap} for support {support:?}");
    }

    // Geometric subsequence law x1(t+2) - x1* = b1 b2 (x1(t) - x1*), to
    // 1e-12 while no clamp is active (weak interference keeps the
    // best-response map linear everywhere).
    let options = RunOptions {
        tol: 1e-15,
        max_steps: 40,
        ..RunOptions::default()
    };
    for _ in 0..100 {
        let m1 = rng.gen_range(0.2..0.6);
        let m2 = rng.gen_range(0.2..0.6);
        let cfg = two_player_with_margins(&mut rng, m1, m2);
        if !weak_interference_holds(&cfg).iter().all(|&ok| ok) {
            continue;
        }
        let sys = build_linear_system(&cfg);
        let slope = sys.a_matrix()[0][1] * sys.a_matrix()[1][0];
        let star = sys.solve().unwrap();
        let x0 = random_interior_profile(&mut rng, 2, 1e-9);
        let trace = run_smbrd(&cfg, &x0, &options).unwrap();
        for t in 0..trace.states.len().saturating_sub(2) {
            let lhs = trace.states[t + 2][0] - star[0];
            let rhs = slope * (trace.states[t][0] - star[0]);
            assert!((lhs - rhs).abs() <= 1e-12);
        }
    }
    println!("acceptance criterion 6 (property suites): PASS");
}

/// Criterion 7: identical seeds give identical results, trial records are
/// reproducible from (seed, index) alone, and repeated sweeps are equal
/// despite internal parallelism. (Byte-identical output files are asserted
/// in the CLI test suite on top of this.)
#[test]
fn criterion_7_seeded_determinism() {
    let options = RunOptions::default();
    for scenario in catalog() {
        for dynamic in [DynamicKind::Simultaneous, DynamicKind::Alternating] {
            let a = monte_carlo(&scenario, dynamic, 300, SEED, &options).unwrap();
            let b = monte_carlo(&scenario, dynamic, 300, SEED, &options).unwrap();
            assert_eq!(a, b, "{} {:?}", scenario.name, dynamic);
            let k = scenario.config.num_players();
            for record in a.records.iter().step_by(37) {
                assert_eq!(record.x0, initial_profile(SEED, record.trial, k));
            }
        }
    }
    println!("acceptance criterion 7 (seeded determinism): PASS");
}
