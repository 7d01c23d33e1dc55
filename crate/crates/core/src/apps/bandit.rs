//! Adversarial multi-armed bandit driven by MD1 with the importance-weighted
//! loss estimate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{BoundKind, BoundSpec, RegretReport, RunTrace, StepRecord, TraceMeta};
use crate::env::{
    bandit_gradient_estimate, effective_bandit_m, AdversaryView, BanditFeedback, LossEnvironment,
};
use crate::error::{contract, invalid, Result};
use crate::md::{sample_categorical, DualState};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BanditRun {
    pub report: RegretReport,
    pub trace: RunTrace,
    /// Largest ∞-norm of any importance-weighted estimate fed to the stepper.
    pub max_estimate: f64,
    /// Whether the comparator used the environment's true means.
    pub stochastic_comparator: bool,
}

/// Runs `steps` rounds of the bandit game on `env` with `n` arms.
///
/// Each round samples an arm from the current exponential weights, reveals
/// only that arm's loss, and feeds `r / p_i` on the pulled coordinate to MD1
/// under the effective bound `M = √(2n)`. Regret is measured in expectation
/// over the learner's draws: against the best arm's mean for stationary
/// stochastic environments, against realized cumulative losses otherwise.
pub fn run_bandit(
    n: usize,
    steps: u64,
    env: &mut dyn LossEnvironment,
    seed: u64,
) -> Result<BanditRun> {
    if steps == 0 {
        return invalid("bandit run needs at least one step");
    }
    let m = effective_bandit_m(n)?;
    if env.dim() != n {
        return invalid(format!("environment has {} arms, expected {n}", env.dim()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = DualState::adaptive(n, m)?;
    let mut trace = RunTrace::new(TraceMeta {
        algorithm: "bandit-md1".into(),
        seed,
        n,
        steps,
        grad_bound: m,
    });
    let means = env.mean_loss().map(<[f64]>::to_vec);
    let mut realized_sums = vec![0.0; n];
    let mut expected_alg = 0.0;
    let mut actions = Vec::with_capacity(steps as usize);
    let mut max_estimate: f64 = 0.0;

    for k in 1..=steps {
        let p = state.current_point();
        let loss = env.next_loss(AdversaryView {
            step: k,
            current: &p,
            past_actions: &actions,
        })?;
        if loss.len() != n {
            return invalid(format!(
                "environment emitted {} losses for {n} arms",
                loss.len()
            ));
        }
        if let Some(v) = loss.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return contract(format!("bandit loss {v} outside [0, 1]"));
        }
        let arm = sample_categorical(p.weights(), &mut rng);
        let feedback = BanditFeedback {
            arm,
            loss: loss[arm],
            step: k,
        };
        let estimate = bandit_gradient_estimate(&p, &feedback)?;
        max_estimate = max_estimate.max(estimate.inf_norm());
        state.update(&estimate)?;

        let expected = match &means {
            Some(mu) => p.dot(mu),
            None => p.dot(&loss),
        };
        expected_alg += expected;
        realized_sums
            .iter_mut()
            .zip(&loss)
            .for_each(|(s, l)| *s += l);

        let mut rec = StepRecord::new(k, feedback.loss, expected);
        rec.action = Some(arm);
        rec.grad_inf_norm = estimate.inf_norm();
        rec.dual_checksum = state.dual().iter().sum();
        if trace.keeps_distributions() {
            rec.distribution = Some(p.into_weights());
        }
        trace.push(rec)?;
        actions.push(arm);
    }

    let comparator: Vec<f64> = match &means {
        Some(mu) => mu.iter().map(|m| m * steps as f64).collect(),
        None => realized_sums,
    };
    let report = RegretReport::new(
        expected_alg,
        &comparator,
        &BoundSpec::new(BoundKind::T1Mean, m, n, steps),
    )?;
    Ok(BanditRun {
        report,
        trace,
        max_estimate,
        stochastic_comparator: means.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Adversary;

    #[test]
    fn single_step_is_well_formed() {
        let mut env = Adversary::bernoulli(vec![0.3, 0.6], 1).unwrap();
        let run = run_bandit(2, 1, &mut env, 1).unwrap();
        assert_eq!(run.trace.len(), 1);
        assert!(run.report.is_consistent());
        assert!(run.report.pseudo_regret <= 1.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        let mut env = Adversary::bernoulli(vec![0.3], 1).unwrap();
        assert!(run_bandit(1, 10, &mut env, 0).is_err());
        let mut env = Adversary::bernoulli(vec![0.3, 0.2], 1).unwrap();
        assert!(run_bandit(2, 0, &mut env, 0).is_err());
        assert!(run_bandit(3, 10, &mut env, 0).is_err());
    }

    #[test]
    fn losses_outside_unit_interval_are_contract_errors() {
        let mut env = Adversary::fixed_list(vec![vec![-0.5, 0.0]], 1.0).unwrap();
        assert!(matches!(
            run_bandit(2, 1, &mut env, 0),
            Err(crate::Error::Contract(_))
        ));
    }

    #[test]
    fn same_seed_same_actions() {
        let run = |seed| {
            let mut env = Adversary::bernoulli(vec![0.4, 0.5, 0.6], 3).unwrap();
            run_bandit(3, 300, &mut env, seed)
                .unwrap()
                .trace
                .records()
                .iter()
                .map(|r| r.action.unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }
}
