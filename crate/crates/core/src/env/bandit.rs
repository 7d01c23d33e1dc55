use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Result};
use crate::simplex::{SimplexPoint, SubgradientSample};

/// The only information a bandit learner receives after a pull.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BanditFeedback {
    pub arm: usize,
    /// Loss of the pulled arm, in `[0, 1]`.
    pub loss: f64,
    pub step: u64,
}

/// Importance-weighted estimate `(0, …, r / p_i, …, 0)` of the full loss vector.
///
/// The declared ∞-norm bound of the sample is `1 / p_i`, which dominates the
/// estimate for every loss in `[0, 1]`; it is not the environment's `M`.
pub fn bandit_gradient_estimate(
    p: &SimplexPoint,
    feedback: &BanditFeedback,
) -> Result<SubgradientSample> {
    let i = feedback.arm;
    if i >= p.dim() {
        return invalid(format!("arm {i} out of range for {} arms", p.dim()));
    }
    if !(0.0..=1.0).contains(&feedback.loss) {
        return contract(format!("bandit loss {} outside [0, 1]", feedback.loss));
    }
    let pi = p[i];
    if pi <= 0.0 {
        return contract(format!("arm {i} was pulled with probability zero"));
    }
    SubgradientSample::sparse(p.dim(), vec![(i, feedback.loss / pi)], 1.0 / pi)
}

/// Effective gradient bound `√(2n)` used in the schedule of bandit runs.
pub fn effective_bandit_m(n: usize) -> Result<f64> {
    if n < 2 {
        return invalid(format!("bandits need at least 2 arms, got {n}"));
    }
    Ok((2.0 * n as f64).sqrt())
}
