//! Step-size schedules for the two steppers.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

fn check_common(grad_bound: f64, n: usize) -> Result<()> {
    if n < 2 {
        return invalid(format!("dimension must be at least 2, got {n}"));
    }
    if !(grad_bound.is_finite() && grad_bound > 0.0) {
        return invalid(format!("gradient bound must be positive, got {grad_bound}"));
    }
    Ok(())
}

/// Temperature of the anytime schedule, `β_t = M √t / √(ln n)`.
pub fn adaptive_beta(t: u64, grad_bound: f64, n: usize) -> Result<f64> {
    check_common(grad_bound, n)?;
    if t == 0 {
        return invalid("adaptive schedule is indexed from t = 1");
    }
    Ok(grad_bound * (t as f64).sqrt() / (n as f64).ln().sqrt())
}

/// Constant step of the known-horizon schedule, `γ = M⁻¹ √(2 ln n / N)` (with `β ≡ 1`).
pub fn nonadaptive_gamma(horizon: u64, grad_bound: f64, n: usize) -> Result<f64> {
    if horizon == 0 {
        return invalid("horizon must be positive");
    }
    gamma_for_horizon(horizon as f64, grad_bound, n)
}

pub(crate) fn gamma_for_horizon(horizon: f64, grad_bound: f64, n: usize) -> Result<f64> {
    check_common(grad_bound, n)?;
    Ok((2.0 * (n as f64).ln() / horizon).sqrt() / grad_bound)
}

/// How the temperature evolves over a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Schedule {
    /// Horizon unknown; `β_t` grows like `√t`.
    Adaptive,
    /// Horizon `N` known in advance; constant `γ`, `β ≡ 1`.
    Nonadaptive { horizon: u64 },
}
