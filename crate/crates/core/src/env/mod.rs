//! Loss sequences and feedback oracles that drive the steppers.
//!
//! An environment is asked for the loss vector of step `k` *before* the
//! learner's randomized play for that step is drawn: [`AdversaryView`] carries
//! the distribution (or, for deterministic learners, the point) about to be
//! used, plus the realized plays of earlier steps, and nothing else.

mod adversary;
mod bandit;
mod io;

pub use adversary::{Adversary, AdversaryView, LossEnvironment};
pub use bandit::{bandit_gradient_estimate, effective_bandit_m, BanditFeedback};
pub use io::{load_loss_csv, StochasticSpec};

use crate::error::{contract, Result};
use crate::simplex::SubgradientSample;

/// Gradient of the linear loss `⟨l, x⟩`: the loss vector itself, certified
/// against the sequence bound `grad_bound`.
pub fn full_info_gradient(loss: &[f64], grad_bound: f64) -> Result<SubgradientSample> {
    if let Some(v) = loss.iter().find(|v| !v.is_finite() || v.abs() > grad_bound) {
        return contract(format!(
            "loss entry {v} violates the declared bound {grad_bound}"
        ));
    }
    SubgradientSample::dense(loss.to_vec(), grad_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn full_info_examples() {
        let g = full_info_gradient(&[0.0; 4], 1.0).unwrap();
        assert_eq!(g.to_dense(), vec![0.0; 4]);
        let g = full_info_gradient(&[1.0, -1.0], 1.0).unwrap();
        assert_eq!(g.to_dense(), vec![1.0, -1.0]);
        assert_eq!(g.inf_norm_bound(), 1.0);
        assert!(matches!(
            full_info_gradient(&[1.5, 0.0], 1.0),
            Err(Error::Contract(_))
        ));
    }
}
