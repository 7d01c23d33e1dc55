//! Regret accounting and high-probability checks over seeds.

use serde::{Deserialize, Serialize};

use super::bounds::{evaluate_bound, BoundKind, BoundSpec};
use super::trace::RunTrace;
use crate::error::{invalid, Error, Result};

/// Summary of one online run against the best fixed coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    /// Cumulative loss of the algorithm.
    pub algorithm_loss: f64,
    /// Cumulative loss of the best fixed coordinate.
    pub comparator_loss: f64,
    /// `(algorithm_loss − comparator_loss) / N`.
    pub pseudo_regret: f64,
    pub bound_kind: BoundKind,
    /// Per-step bound for this run's parameters.
    pub bound: f64,
    pub n: usize,
    pub steps: u64,
    pub grad_bound: f64,
}

impl RegretReport {
    /// `comparator_sums[i]` is the cumulative loss of always playing `i`.
    pub fn new(algorithm_loss: f64, comparator_sums: &[f64], bound: &BoundSpec) -> Result<Self> {
        if comparator_sums.is_empty() {
            return invalid("comparator needs at least one coordinate");
        }
        let comparator_loss = comparator_sums
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            algorithm_loss,
            comparator_loss,
            pseudo_regret: (algorithm_loss - comparator_loss) / bound.steps as f64,
            bound_kind: bound.kind,
            bound: evaluate_bound(bound)?,
            n: bound.n,
            steps: bound.steps,
            grad_bound: bound.grad_bound,
        })
    }

    /// The stored per-step regret matches the stored totals.
    pub fn is_consistent(&self) -> bool {
        self.pseudo_regret == (self.algorithm_loss - self.comparator_loss) / self.steps as f64
    }

    pub fn within_bound(&self) -> bool {
        self.pseudo_regret <= self.bound
    }
}

fn check_trace(trace: &RunTrace, comparator: &[f64]) -> Result<f64> {
    if !trace.is_complete() || trace.is_empty() {
        return Err(Error::InvalidState(format!(
            "trace has {} of {} steps",
            trace.len(),
            trace.meta.steps
        )));
    }
    if comparator.len() != trace.meta.n {
        return invalid(format!(
            "comparator has {} coordinates, run has {}",
            comparator.len(),
            trace.meta.n
        ));
    }
    Ok(comparator.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Mean expected per-step loss of the trace minus `min_i comparator_i / N`.
///
/// `comparator[i]` is the cumulative (expected or realized) loss of the fixed
/// play `i` over the run.
pub fn pseudo_regret(trace: &RunTrace, comparator: &[f64]) -> Result<f64> {
    let best = check_trace(trace, comparator)?;
    let n_steps = trace.meta.steps as f64;
    Ok(trace.total_expected_loss() / n_steps - best / n_steps)
}

/// As [`pseudo_regret`] but with the realized loss of each step.
pub fn realized_regret(trace: &RunTrace, comparator: &[f64]) -> Result<f64> {
    let best = check_trace(trace, comparator)?;
    let n_steps = trace.meta.steps as f64;
    Ok(trace.total_loss() / n_steps - best / n_steps)
}

/// Outcome of [`highprob_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighProbOutcome {
    pub pass: bool,
    pub exceedances: usize,
    pub exceedance_fraction: f64,
    /// Allowed fraction: `σ + 2 √(σ(1 − σ)/seeds)`.
    pub allowed_fraction: f64,
}

/// Checks that at most a `σ` fraction of seeds (plus two binomial standard
/// errors) exceed `bound`.
pub fn highprob_check(regrets: &[f64], bound: f64, sigma: f64) -> Result<HighProbOutcome> {
    if regrets.len() < 10 {
        return invalid(format!("need at least 10 seeds, got {}", regrets.len()));
    }
    if !(0.0..=1.0).contains(&sigma) {
        return invalid(format!("sigma must lie in [0, 1], got {sigma}"));
    }
    let seeds = regrets.len() as f64;
    let exceedances = regrets.iter().filter(|r| **r > bound).count();
    let fraction = exceedances as f64 / seeds;
    let allowed = sigma + 2.0 * (sigma * (1.0 - sigma) / seeds).sqrt();
    Ok(HighProbOutcome {
        pass: fraction <= allowed,
        exceedances,
        exceedance_fraction: fraction,
        allowed_fraction: allowed,
    })
}
