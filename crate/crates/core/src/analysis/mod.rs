//! Regret accounting, bound evaluation, statistical checks and run
//! instrumentation.

mod bounds;
mod counter;
mod regret;
mod stats;
mod trace;

pub use bounds::{evaluate_bound, BoundKind, BoundSpec};
pub use counter::{ReadCounter, Scope};
pub use regret::{highprob_check, pseudo_regret, realized_regret, HighProbOutcome, RegretReport};
pub use stats::{chi_square_gof, GofResult};
pub use trace::{RunTrace, StepRecord, TraceMeta, DEFAULT_DISTRIBUTION_BUDGET};
