//! `cog` - command-line front end for the capacity offload game engine.
//!
//! Subcommands: `validate`, `solve`, `run`, `montecarlo`, `catalog`.
//! Exit codes: 0 success, 1 validation or usage error, 2 runtime error
//! (grid budget, I/O).

mod scenario;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cog_core::dynamics::{run_ambrd, run_smbrd, Outcome, RunOptions, Schedule};
use cog_core::equilibrium::{
    brute_force_clusters, build_linear_system, classify_two_player, solve_linear_ne, verify_ne,
    weak_interference_holds, TwoPlayerKind,
};
use cog_core::experiment::{
    catalog, find_scenario, monte_carlo, DynamicKind, Expectation, ExperimentResult,
    InterferenceLevel, Provenance, Scenario,
};
use cog_core::game::player_view;
use cog_core::{DynamicsTrace, NetworkConfig, StrategyProfile};

use scenario::{fmt_f64, parse_dynamic, RunBlock, ScenarioFile};

/// Environment variable consulted for the default Monte Carlo seed; the
/// `--seed` flag always wins.
const SEED_ENV: &str = "COG_SEED";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Runtime(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<cog_core::Error> for CliError {
    fn from(err: cog_core::Error) -> Self {
        match err {
            cog_core::Error::GridBudget { .. } | cog_core::Error::Internal(_) => {
                CliError::Runtime(err.to_string())
            }
            _ => CliError::Validation(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "cog",
    version,
    about = "Capacity offload game: Nash equilibria and best-response dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file against every configuration invariant
    Validate {
        /// Scenario file (JSON)
        path: PathBuf,
    },
    /// Compute and classify the Nash equilibria of a scenario
    Solve {
        /// Scenario file (JSON)
        path: Option<PathBuf>,
        /// Built-in scenario name instead of a file
        #[arg(long, conflicts_with = "path")]
        scenario: Option<String>,
        /// Grid step for the brute-force fallback
        #[arg(long, default_value_t = 1e-3)]
        resolution: f64,
        /// Point budget for the brute-force fallback
        #[arg(long, default_value_t = cog_core::equilibrium::DEFAULT_GRID_BUDGET)]
        max_cells: u128,
    },
    /// Run one best-response dynamic and report the outcome
    Run {
        /// Scenario file (JSON)
        path: Option<PathBuf>,
        /// Built-in scenario name instead of a file
        #[arg(long, conflicts_with = "path")]
        scenario: Option<String>,
        /// smbrd (simultaneous) or ambrd (alternating)
        #[arg(long)]
        dynamic: Option<String>,
        /// Initial profile, comma-separated (defaults to 0.5 everywhere)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        /// Convergence tolerance (default 0.01)
        #[arg(long)]
        tol: Option<f64>,
        /// Update budget (default 100; individual updates for ambrd)
        #[arg(long)]
        max_steps: Option<usize>,
        /// Write a per-step trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Monte Carlo sweep over uniform random initial strategies
    Montecarlo {
        /// Scenario file (JSON)
        path: Option<PathBuf>,
        /// Built-in scenario name instead of a file
        #[arg(long, conflicts_with = "path")]
        scenario: Option<String>,
        /// smbrd (simultaneous) or ambrd (alternating)
        #[arg(long)]
        dynamic: Option<String>,
        /// Number of trials (default 1000)
        #[arg(long)]
        trials: Option<u64>,
        /// Master seed (default: $COG_SEED, then the file run block, then 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Convergence tolerance (default 0.01)
        #[arg(long)]
        tol: Option<f64>,
        /// Update budget per trial (default 100)
        #[arg(long)]
        max_steps: Option<usize>,
        /// Per-trial records CSV; the CDF lands next to it as *.summary.csv
        #[arg(long)]
        out: PathBuf,
    },
    /// List built-in scenarios
    Catalog {
        /// Print one built-in scenario as a scenario file
        #[arg(long)]
        export: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let is_error = err.use_stderr();
            let _ = err.print();
            return if is_error {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Solve {
            path,
            scenario,
            resolution,
            max_cells,
        } => cmd_solve(path.as_deref(), scenario.as_deref(), resolution, max_cells),
        Command::Run {
            path,
            scenario,
            dynamic,
            x0,
            tol,
            max_steps,
            trace,
        } => cmd_run(
            path.as_deref(),
            scenario.as_deref(),
            dynamic.as_deref(),
            x0,
            tol,
            max_steps,
            trace.as_deref(),
        ),
        Command::Montecarlo {
            path,
            scenario,
            dynamic,
            trials,
            seed,
            tol,
            max_steps,
            out,
        } => cmd_montecarlo(
            path.as_deref(),
            scenario.as_deref(),
            dynamic.as_deref(),
            trials,
            seed,
            tol,
            max_steps,
            &out,
        ),
        Command::Catalog { export } => cmd_catalog(export.as_deref()),
    }
}

/// A scenario resolved from a file or the built-in catalog.
struct Loaded {
    label: String,
    config: NetworkConfig,
    run: Option<RunBlock>,
}

fn load(path: Option<&Path>, name: Option<&str>) -> Result<Loaded, CliError> {
    match (path, name) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            let file = ScenarioFile::parse(&text, &path.display().to_string())?;
            let config = file.to_config()?;
            Ok(Loaded {
                label: path.display().to_string(),
                config,
                run: file.run,
            })
        }
        (None, Some(name)) => {
            let scenario = find_scenario(name).ok_or_else(|| {
                let names: Vec<String> = catalog().into_iter().map(|s| s.name).collect();
                CliError::Usage(format!(
                    "unknown scenario {name:?}; built-ins: {}",
                    names.join(", ")
                ))
            })?;
            Ok(Loaded {
                label: scenario.name.clone(),
                config: scenario.config,
                run: None,
            })
        }
        _ => Err(CliError::Usage(
            "provide a scenario file path or --scenario NAME".to_string(),
        )),
    }
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let file = ScenarioFile::parse(&text, &path.display().to_string())?;
    let violations = file.violations();
    if violations.is_empty() {
        println!("ok: {} (K = {})", path.display(), file.num_players);
        Ok(())
    } else {
        Err(CliError::Validation(violations.join("\n")))
    }
}

fn kind_label(kind: TwoPlayerKind) -> &'static str {
    match kind {
        TwoPlayerKind::UniqueInterior => "UNIQUE_INTERIOR",
        TwoPlayerKind::UniqueBoundaryP1Saturates => "UNIQUE_BOUNDARY_P1_SATURATES",
        TwoPlayerKind::UniqueBoundaryP2Saturates => "UNIQUE_BOUNDARY_P2_SATURATES",
        TwoPlayerKind::Three => "THREE",
        TwoPlayerKind::TwoSingular => "TWO_SINGULAR",
        TwoPlayerKind::InfiniteSegment => "INFINITE_SEGMENT",
    }
}

fn fmt_profile(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|&v| fmt_f64(v)).collect();
    parts.join(" ")
}

fn cmd_solve(
    path: Option<&Path>,
    name: Option<&str>,
    resolution: f64,
    max_cells: u128,
) -> Result<(), CliError> {
    let loaded = load(path, name)?;
    let config = &loaded.config;
    let k = config.num_players();
    println!("scenario: {} (K = {k})", loaded.label);

    if k == 2 {
        let class = classify_two_player(config)?;
        println!("classification: {}", kind_label(class.kind));
        for (i, ne) in class.equilibria.iter().enumerate() {
            println!("equilibrium {}: {}", i + 1, fmt_profile(ne.as_slice()));
        }
        if let Some(segment) = &class.segment {
            println!("segment start: {}", fmt_profile(segment.start.as_slice()));
            println!("segment end:   {}", fmt_profile(segment.end.as_slice()));
        }
        for ne in &class.equilibria {
            debug_assert!(verify_ne(config, ne, 1e-9).unwrap_or(false));
        }
        return Ok(());
    }

    let weak = weak_interference_holds(config);
    if weak.iter().all(|&ok| ok) {
        let system = build_linear_system(config);
        let ne = solve_linear_ne(config)?;
        println!("regime: weak interference (all players)");
        println!("gershgorin bound: {}", fmt_f64(system.gershgorin_bound()));
        println!("equilibrium: {}", fmt_profile(ne.as_slice()));
        println!(
            "fixed-point residual: {}",
            fmt_f64(system.fixed_point_residual(ne.as_slice()))
        );
        return Ok(());
    }

    let violators: Vec<String> = weak
        .iter()
        .enumerate()
        .filter(|(_, &ok)| !ok)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    eprintln!(
        "warning: weak interference fails for players [{}]; \
         no closed-form route applies, using the grid oracle \
         (resolution {resolution})",
        violators.join(", ")
    );
    let clusters = brute_force_clusters(config, resolution, max_cells)?;
    println!("regime: outside the linear regime; grid oracle candidates:");
    println!("resolution: {}", fmt_f64(resolution));
    for (i, cluster) in clusters.iter().enumerate() {
        println!(
            "candidate {}: {}",
            i + 1,
            fmt_profile(cluster.representative.as_slice())
        );
    }
    Ok(())
}

struct RunParams {
    dynamic: DynamicKind,
    x0: StrategyProfile,
    options: RunOptions,
}

fn resolve_run_params(
    loaded: &Loaded,
    dynamic: Option<&str>,
    x0: Option<Vec<f64>>,
    tol: Option<f64>,
    max_steps: Option<usize>,
) -> Result<RunParams, CliError> {
    let k = loaded.config.num_players();
    let block = loaded.run.as_ref();

    let dynamic_text = dynamic
        .map(str::to_string)
        .or_else(|| block.and_then(|b| b.dynamic.clone()))
        .unwrap_or_else(|| "smbrd".to_string());
    let dynamic = parse_dynamic(&dynamic_text).ok_or_else(|| {
        CliError::Usage(format!(
            "--dynamic: expected \"smbrd\" or \"ambrd\", got {dynamic_text:?}"
        ))
    })?;

    let x0_values = x0
        .or_else(|| block.and_then(|b| b.x0.clone()))
        .unwrap_or_else(|| vec![0.5; k]);
    if x0_values.len() != k {
        return Err(CliError::Usage(format!(
            "--x0: expected {k} comma-separated values, got {}",
            x0_values.len()
        )));
    }
    let x0 = StrategyProfile::new(x0_values)
        .map_err(|e| CliError::Usage(format!("--x0: {e}")))?;

    let options = RunOptions {
        tol: tol.or_else(|| block.and_then(|b| b.tol)).unwrap_or(1e-2),
        max_steps: max_steps
            .or_else(|| block.and_then(|b| b.max_steps))
            .unwrap_or(100),
        ..RunOptions::default()
    };
    Ok(RunParams {
        dynamic,
        x0,
        options,
    })
}

fn execute(config: &NetworkConfig, params: &RunParams) -> Result<DynamicsTrace, CliError> {
    let trace = match params.dynamic {
        DynamicKind::Simultaneous => run_smbrd(config, &params.x0, &params.options)?,
        DynamicKind::Alternating => {
            let order: Vec<usize> = (0..config.num_players()).collect();
            run_ambrd(config, &params.x0, &order, &params.options)?
        }
    };
    Ok(trace)
}

fn cmd_run(
    path: Option<&Path>,
    name: Option<&str>,
    dynamic: Option<&str>,
    x0: Option<Vec<f64>>,
    tol: Option<f64>,
    max_steps: Option<usize>,
    trace_out: Option<&Path>,
) -> Result<(), CliError> {
    let loaded = load(path, name)?;
    let params = resolve_run_params(&loaded, dynamic, x0, tol, max_steps)?;
    let trace = execute(&loaded.config, &params)?;

    println!(
        "scenario: {} (K = {}), dynamic: {}",
        loaded.label,
        loaded.config.num_players(),
        params.dynamic.name()
    );
    let performed = trace.states.len() - 1;
    match &trace.outcome {
        Outcome::Converged { steps, .. } => {
            println!("outcome: CONVERGED");
            println!("steps: {steps}");
        }
        Outcome::Cycled { period, .. } => {
            println!("outcome: CYCLED");
            println!("steps: {performed}");
            println!("period: {period}");
        }
        Outcome::Exhausted { max_steps } => {
            println!("outcome: EXHAUSTED");
            println!("steps: {max_steps}");
        }
    }
    let last = trace.states.last().expect("trace has at least x0");
    println!("final profile: {}", fmt_profile(last.as_slice()));
    for k in 0..loaded.config.num_players() {
        let view = player_view(&loaded.config, last, k)?;
        println!(
            "player {}: interference = {}, sir = {}",
            k + 1,
            fmt_f64(view.interference),
            if view.sir.is_infinite() {
                "inf".to_string()
            } else {
                fmt_f64(view.sir)
            }
        );
    }
    if let Some(path) = trace_out {
        std::fs::write(path, trace_csv(&trace))
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        println!("trace written to {}", path.display());
    }
    Ok(())
}

/// Per-step trace: `step,player_updated,x_1..x_K,max_delta`, with an `init`
/// row for the starting profile. Player indices are 1-based; `all` marks
/// simultaneous updates.
fn trace_csv(trace: &DynamicsTrace) -> String {
    let k = trace.states.first().map_or(0, |s| s.len());
    let mut out = String::from("step,player_updated");
    for i in 1..=k {
        let _ = write!(out, ",x_{i}");
    }
    out.push_str(",max_delta\n");
    for (t, state) in trace.states.iter().enumerate() {
        let player = if t == 0 {
            "init".to_string()
        } else {
            match &trace.schedule {
                Schedule::Simultaneous => "all".to_string(),
                Schedule::Alternating(order) => (order[(t - 1) % order.len()] + 1).to_string(),
            }
        };
        let _ = write!(out, "{t},{player}");
        for &v in state.as_slice() {
            let _ = write!(out, ",{}", fmt_f64(v));
        }
        if t == 0 {
            out.push_str(",\n");
        } else {
            let delta = state
                .as_slice()
                .iter()
                .zip(trace.states[t - 1].as_slice())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let _ = writeln!(out, ",{}", fmt_f64(delta));
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_montecarlo(
    path: Option<&Path>,
    name: Option<&str>,
    dynamic: Option<&str>,
    trials: Option<u64>,
    seed: Option<u64>,
    tol: Option<f64>,
    max_steps: Option<usize>,
    out: &Path,
) -> Result<(), CliError> {
    let loaded = load(path, name)?;
    let block = loaded.run.as_ref();
    let params = resolve_run_params(&loaded, dynamic, None, tol, max_steps)?;

    let trials = trials
        .or_else(|| block.and_then(|b| b.trials))
        .unwrap_or(1000);
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var(SEED_ENV) {
            Ok(text) => text.parse::<u64>().map_err(|_| {
                CliError::Usage(format!("{SEED_ENV}: expected an integer seed, got {text:?}"))
            })?,
            Err(_) => block.and_then(|b| b.seed).unwrap_or(0),
        },
    };

    let scenario = Scenario {
        name: loaded.label.clone(),
        config: loaded.config.clone(),
        expected: None,
        provenance: Provenance::User,
    };
    let result = monte_carlo(&scenario, params.dynamic, trials, seed, &params.options)?;

    std::fs::write(out, records_csv(&result))
        .map_err(|e| CliError::Runtime(format!("{}: {e}", out.display())))?;
    let summary_path = out.with_extension("summary.csv");
    std::fs::write(&summary_path, summary_csv(&result))
        .map_err(|e| CliError::Runtime(format!("{}: {e}", summary_path.display())))?;

    println!(
        "scenario: {} (K = {}), dynamic: {}, trials: {}, seed: {}",
        loaded.label,
        loaded.config.num_players(),
        params.dynamic.name(),
        trials,
        seed
    );
    println!(
        "converged: {}, cycled: {}, exhausted: {}",
        fmt_f64(result.fraction_converged),
        fmt_f64(result.fraction_cycled),
        fmt_f64(result.fraction_exhausted)
    );
    println!("records written to {}", out.display());
    println!("cdf written to {}", summary_path.display());
    Ok(())
}

/// Per-trial records: `trial,x0_1..x0_K,outcome,steps`, steps `inf` for
/// non-converged trials.
fn records_csv(result: &ExperimentResult) -> String {
    let k = result
        .records
        .first()
        .map_or(0, |r| r.x0.len());
    let mut out = String::from("trial");
    for i in 1..=k {
        let _ = write!(out, ",x0_{i}");
    }
    out.push_str(",outcome,steps\n");
    for record in &result.records {
        let _ = write!(out, "{}", record.trial);
        for &v in record.x0.as_slice() {
            let _ = write!(out, ",{}", fmt_f64(v));
        }
        let steps = record
            .steps
            .map_or_else(|| "inf".to_string(), |s| s.to_string());
        let _ = writeln!(out, ",{},{steps}", record.outcome.name());
    }
    out
}

/// Empirical CDF of steps-to-convergence: `steps,cumulative_fraction`.
fn summary_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("steps,cumulative_fraction\n");
    for point in &result.cdf {
        let _ = writeln!(out, "{},{}", point.steps, fmt_f64(point.fraction));
    }
    out
}

fn expectation_label(expected: Option<Expectation>) -> String {
    match expected {
        Some(Expectation::TwoPlayer(kind)) => kind_label(kind).to_string(),
        Some(Expectation::Interference(level)) => match level {
            InterferenceLevel::Weak => "WEAK_INTERFERENCE".to_string(),
            InterferenceLevel::Medium => "MEDIUM_INTERFERENCE".to_string(),
            InterferenceLevel::Strong => "STRONG_INTERFERENCE".to_string(),
        },
        None => "-".to_string(),
    }
}

fn cmd_catalog(export: Option<&str>) -> Result<(), CliError> {
    if let Some(name) = export {
        let scenario = find_scenario(name).ok_or_else(|| {
            CliError::Usage(format!("unknown scenario {name:?}; run `cog catalog`"))
        })?;
        print!("{}", ScenarioFile::from_scenario(&scenario).to_json());
        return Ok(());
    }
    println!("name            K  expected");
    for scenario in catalog() {
        println!(
            "{:<14} {:>2}  {}",
            scenario.name,
            scenario.config.num_players(),
            expectation_label(scenario.expected)
        );
    }
    Ok(())
}
