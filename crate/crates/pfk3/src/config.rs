//! Resource budgets for the symbolic engines.
//!
//! Budgets bound basis growth and wall-clock time of a single Groebner run.
//! Exceeding a budget is reported as an error; the engine never degrades to
//! an approximate or partial answer.

use std::time::Duration;

/// Environment variable capping the wall time (in milliseconds) of a single
/// Groebner run when the CLI builds its budget.
pub const BUDGET_ENV_VAR: &str = "PFK3_BUDGET_MS";

#[derive(Debug, Clone)]
pub struct Budget {
    /// Maximum number of basis elements kept during a Buchberger run.
    pub max_basis: usize,
    /// Maximum number of S-pair reductions performed in one run.
    pub max_reductions: usize,
    /// Optional wall-clock cap for one run.
    pub wall: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_basis: 20_000,
            max_reductions: 2_000_000,
            wall: None,
        }
    }
}

impl Budget {
    /// Default budget with the wall-clock cap taken from `PFK3_BUDGET_MS`,
    /// if that variable is set and parses as a positive integer.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        if let Ok(raw) = std::env::var(BUDGET_ENV_VAR) {
            if let Ok(ms) = raw.trim().parse::<u64>() {
                if ms > 0 {
                    budget.wall = Some(Duration::from_millis(ms));
                }
            }
        }
        budget
    }

    /// Replaces the wall-clock cap.
    pub fn with_wall_ms(mut self, ms: u64) -> Self {
        self.wall = Some(Duration::from_millis(ms));
        self
    }
}
