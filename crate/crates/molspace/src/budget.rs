//! Search limits shared by every semi-decision procedure.

use serde::{Deserialize, Serialize};

/// Environment variable overriding `Budget::max_steps`.
pub const BUDGET_ENV: &str = "MOLSPACE_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest graph decided by exhaustive deletion search.
    pub exact_size: usize,
    /// Cap on search nodes per top-level query.
    pub max_steps: u64,
    /// Largest rim searched exhaustively for point dimension.
    pub rim_cap: usize,
    /// Cap on canonical-labeling search nodes.
    pub canon_nodes: u64,
    /// Cap on cliques enumerated by invariant computations.
    pub clique_limit: u64,
    /// Cap on committed rounds in `minimize`.
    pub max_rounds: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            exact_size: 12,
            max_steps: 5_000_000,
            rim_cap: 16,
            canon_nodes: crate::canon::DEFAULT_NODE_LIMIT,
            clique_limit: crate::euler::DEFAULT_CLIQUE_LIMIT,
            max_rounds: 100_000,
        }
    }
}

impl Budget {
    /// Defaults, with `max_steps` taken from `MOLSPACE_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            b.max_steps = n;
        }
        b
    }

    pub fn with_steps(steps: u64) -> Self {
        Budget { max_steps: steps, ..Budget::default() }
    }
}
