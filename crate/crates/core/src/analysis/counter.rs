use serde::{Deserialize, Serialize};

/// Where a matrix read happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Reads performed by the solver itself.
    Solver,
    /// Full passes made only to certify a result (duality gap, residuals).
    Verify,
}

/// Per-run count of matrix-entry accesses, split by [`Scope`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadCounter {
    solver: u64,
    verify: u64,
}

impl ReadCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, scope: Scope, reads: u64) {
        match scope {
            Scope::Solver => self.solver += reads,
            Scope::Verify => self.verify += reads,
        }
    }

    pub fn get(&self, scope: Scope) -> u64 {
        match scope {
            Scope::Solver => self.solver,
            Scope::Verify => self.verify,
        }
    }

    pub fn merge(&mut self, other: &ReadCounter) {
        self.solver += other.solver;
        self.verify += other.verify;
    }
}
