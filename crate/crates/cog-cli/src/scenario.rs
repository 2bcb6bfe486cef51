//! Scenario files: a JSON document mirroring the network configuration plus
//! an optional block of run parameters.
//!
//! ```json
//! {
//!   "num_players": 2,
//!   "alpha": 0.5,
//!   "beta": [0.25, 0.25],
//!   "power": [1.0, 1.0],
//!   "gain": [[1.0, 0.6], [0.4, 1.0]],
//!   "noise_density": 0.01,
//!   "run": { "dynamic": "smbrd", "x0": [0.5, 0.5], "tol": 0.01,
//!            "max_steps": 100, "trials": 1000, "seed": 42 }
//! }
//! ```
//!
//! The gain matrix is row-major with row = receiver index. Numbers are
//! written back with 17 significant digits so that parse → serialize →
//! parse round-trips are exact at double precision.

use cog_core::experiment::Scenario;
use cog_core::NetworkConfig;
use serde::Deserialize;

use crate::CliError;

/// Optional per-file run defaults; command-line flags always win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    pub dynamic: Option<String>,
    pub x0: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub max_steps: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub num_players: usize,
    pub alpha: f64,
    pub beta: Vec<f64>,
    pub power: Vec<f64>,
    pub gain: Vec<Vec<f64>>,
    pub noise_density: f64,
    #[serde(default)]
    pub run: Option<RunBlock>,
}

impl ScenarioFile {
    /// Parses a scenario document, reporting the line and column on JSON
    /// errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Validation(format!(
                "{origin}:{}:{}: {}",
                e.line(),
                e.column(),
                e
            ))
        })
    }

    /// All semantic violations: dimension mismatches against `num_players`
    /// first, then every configuration invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let k = self.num_players;
        if k == 0 {
            v.push("num_players: must be >= 1".to_string());
        }
        if self.beta.len() != k {
            v.push(format!(
                "beta: expected {k} entries to match num_players, got {}",
                self.beta.len()
            ));
        }
        if self.power.len() != k {
            v.push(format!(
                "power: expected {k} entries to match num_players, got {}",
                self.power.len()
            ));
        }
        if self.gain.len() != k {
            v.push(format!(
                "gain: expected {k} rows to match num_players, got {}",
                self.gain.len()
            ));
        }
        for (r, row) in self.gain.iter().enumerate() {
            if row.len() != k {
                v.push(format!(
                    "gain[{r}]: expected {k} columns to match num_players, got {}",
                    row.len()
                ));
            }
        }
        if !v.is_empty() {
            // Dimension errors first; the value checks below assume
            // consistent shapes.
            return v;
        }
        v.extend(NetworkConfig::check(
            self.alpha,
            &self.beta,
            &self.power,
            &self.gain,
            self.noise_density,
        ));
        if let Some(run) = &self.run {
            if let Some(d) = &run.dynamic {
                if parse_dynamic(d).is_none() {
                    v.push(format!("run.dynamic: expected \"smbrd\" or \"ambrd\", got {d:?}"));
                }
            }
            if let Some(x0) = &run.x0 {
                if x0.len() != k {
                    v.push(format!(
                        "run.x0: expected {k} entries to match num_players, got {}",
                        x0.len()
                    ));
                }
                for (i, &value) in x0.iter().enumerate() {
                    if !(value.is_finite() && (0.0..=1.0).contains(&value)) {
                        v.push(format!("run.x0[{i}]: must lie in [0, 1], got {value}"));
                    }
                }
            }
            if let Some(tol) = run.tol {
                if tol.is_nan() || tol <= 0.0 {
                    v.push(format!("run.tol: must be > 0, got {tol}"));
                }
            }
            if run.max_steps == Some(0) {
                v.push("run.max_steps: must be >= 1".to_string());
            }
            if run.trials == Some(0) {
                v.push("run.trials: must be >= 1".to_string());
            }
        }
        v
    }

    /// Builds the validated configuration, or lists every violation.
    pub fn to_config(&self) -> Result<NetworkConfig, CliError> {
        let violations = self.violations();
        if !violations.is_empty() {
            return Err(CliError::Validation(violations.join("\n")));
        }
        NetworkConfig::new(
            self.alpha,
            self.beta.clone(),
            self.power.clone(),
            self.gain.clone(),
            self.noise_density,
        )
        .map_err(CliError::from)
    }

    /// Serializes with 17 significant digits per number.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"num_players\": {},\n", self.num_players));
        out.push_str(&format!("  \"alpha\": {},\n", fmt_f64(self.alpha)));
        out.push_str(&format!("  \"beta\": {},\n", fmt_f64_list(&self.beta)));
        out.push_str(&format!("  \"power\": {},\n", fmt_f64_list(&self.power)));
        let rows: Vec<String> = self
            .gain
            .iter()
            .map(|row| format!("    {}", fmt_f64_list(row)))
            .collect();
        out.push_str(&format!("  \"gain\": [\n{}\n  ],\n", rows.join(",\n")));
        out.push_str(&format!(
            "  \"noise_density\": {}\n",
            fmt_f64(self.noise_density)
        ));
        out.push_str("}\n");
        out
    }

    /// Mirrors a built-in scenario as a file document.
    pub fn from_scenario(scenario: &Scenario) -> Self {
        let config = &scenario.config;
        ScenarioFile {
            num_players: config.num_players(),
            alpha: config.alpha(),
            beta: config.betas().to_vec(),
            power: config.powers().to_vec(),
            gain: config.gain_rows().to_vec(),
            noise_density: config.noise_density(),
            run: None,
        }
    }
}

pub fn parse_dynamic(text: &str) -> Option<cog_core::experiment::DynamicKind> {
    match text.to_ascii_lowercase().as_str() {
        "smbrd" | "simultaneous" => Some(cog_core::experiment::DynamicKind::Simultaneous),
        "ambrd" | "alternating" => Some(cog_core::experiment::DynamicKind::Alternating),
        _ => None,
    }
}

/// 17 significant digits: lossless for f64 and deterministic across runs.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

fn fmt_f64_list(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
    format!("[{}]", inner.join(", "))
}
