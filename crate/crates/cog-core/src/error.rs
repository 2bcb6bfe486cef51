//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by game, equilibrium, dynamics, and experiment operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// One or more configuration or input invariants are violated.
    /// Each entry names the offending field and the violated constraint.
    #[error("validation failed: {}", violations.join("; "))]
    Validation { violations: Vec<String> },

    /// Player index out of range.
    #[error("player index {index} out of range for {num_players} players")]
    PlayerIndex { index: usize, num_players: usize },

    /// Operation requires a specific number of players.
    #[error("operation requires {required} players, configuration has {actual}")]
    Dimension { required: usize, actual: usize },

    /// A length mismatch between related inputs (e.g. profile vs. config).
    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// The weak-interference condition fails for the listed players, so the
    /// linear-regime solver does not apply; fall back to dynamics or the
    /// brute-force oracle.
    #[error("weak-interference condition fails for players {violators:?}; \
             the linear NE solver does not apply")]
    Regime { violators: Vec<usize> },

    /// Grid scan would exceed the configured point budget.
    #[error("grid of {points} points exceeds the budget of {budget}; \
             use a coarser resolution")]
    GridBudget { points: u128, budget: u128 },

    /// Not enough trailing states for cycle detection.
    #[error("cycle detection needs at least {required} states, got {actual}")]
    InsufficientHistory { required: usize, actual: usize },

    /// Invalid finite-support distribution.
    #[error("invalid mixed-strategy support: {0}")]
    Distribution(String),

    /// Two experiment results cannot be compared.
    #[error("results are not comparable: {0}")]
    Comparison(String),

    /// Invariant breach that should be unreachable given validated inputs.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation {
            violations: vec![msg.into()],
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
