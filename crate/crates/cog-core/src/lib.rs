//! Simulation and analysis engine for the capacity offload game: `K`
//! wireless service providers split transmit power between a private band
//! and a shared interference-coupled band, each maximizing its own
//! achievable rate.
//!
//! The crate computes per-player utilities and best responses ([`game`]),
//! finds and classifies Nash equilibria with closed-form, linear-solver,
//! and brute-force routes ([`equilibrium`]), runs simultaneous- and
//! alternating-move best-response dynamics with cycle detection
//! ([`dynamics`]), and drives reproducible Monte Carlo convergence
//! experiments ([`experiment`]).

pub mod config;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod experiment;
pub mod game;

pub use config::{NetworkConfig, PlayerView, StrategyProfile};
pub use dynamics::{DynamicsTrace, Outcome, RunOptions, Schedule};
pub use equilibrium::{LinearBestResponseSystem, TwoPlayerClass, TwoPlayerKind};
pub use error::{Error, Result};
pub use experiment::{DynamicKind, ExperimentResult, Scenario};
