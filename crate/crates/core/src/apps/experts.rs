//! Prediction with expert advice: linear losses (MD1), convex losses through
//! the linear surrogate (MD1), and arbitrary losses by sampling one expert per
//! step (MD2).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{BoundKind, BoundSpec, RegretReport, RunTrace, StepRecord, TraceMeta};
use crate::env::{full_info_gradient, AdversaryView, LossEnvironment};
use crate::error::{contract, invalid, Result};
use crate::md::{sample_categorical, DualState};
use crate::simplex::SimplexPoint;

/// An expert-advice problem with losses `λ(ω, ζ)`.
///
/// Each step the experts announce strategies `ζ_i`, then nature picks `ω`
/// knowing the learner's current weights (but never its random draw).
pub trait ExpertGame {
    fn n_experts(&self) -> usize;

    /// `M` with `|λ| ≤ M`.
    fn bound(&self) -> f64;

    fn strategies(&mut self, step: u64) -> Result<Vec<Vec<f64>>>;

    fn nature(&mut self, view: AdversaryView<'_>) -> Result<Vec<f64>>;

    fn loss(&self, omega: &[f64], strategy: &[f64]) -> f64;
}

/// Linear losses as an expert game: expert `i` plays the vertex `e_i` and
/// `λ(ω, ζ) = ⟨ω, ζ⟩`, with `ω` taken from a [`LossEnvironment`].
pub struct LinearExperts<'a> {
    env: &'a mut dyn LossEnvironment,
    vertices: Vec<Vec<f64>>,
}

impl<'a> LinearExperts<'a> {
    pub fn new(env: &'a mut dyn LossEnvironment) -> Self {
        let n = env.dim();
        let vertices = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        Self { env, vertices }
    }
}

impl ExpertGame for LinearExperts<'_> {
    fn n_experts(&self) -> usize {
        self.vertices.len()
    }

    fn bound(&self) -> f64 {
        self.env.bound()
    }

    fn strategies(&mut self, _step: u64) -> Result<Vec<Vec<f64>>> {
        Ok(self.vertices.clone())
    }

    fn nature(&mut self, view: AdversaryView<'_>) -> Result<Vec<f64>> {
        self.env.next_loss(view)
    }

    fn loss(&self, omega: &[f64], strategy: &[f64]) -> f64 {
        omega.iter().zip(strategy).map(|(a, b)| a * b).sum()
    }
}

/// Result of an expert run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpertsRun {
    /// Regret of the loss the guarantee is stated for: the linear loss
    /// `⟨l, x⟩` for MD1 runs, the expectation over the draw for MD2 runs.
    pub expected: RegretReport,
    /// Regret of the losses actually incurred.
    pub realized: RegretReport,
    pub trace: RunTrace,
}

fn new_trace(algorithm: &str, seed: u64, n: usize, steps: u64, m: f64) -> RunTrace {
    RunTrace::new(TraceMeta {
        algorithm: algorithm.into(),
        seed,
        n,
        steps,
        grad_bound: m,
    })
}

fn check_run(n: usize, steps: u64, m: f64) -> Result<()> {
    if n < 2 {
        return invalid(format!("need at least 2 experts, got {n}"));
    }
    if steps == 0 {
        return invalid("run needs at least one step");
    }
    if !(m.is_finite() && m > 0.0) {
        return invalid(format!("loss bound must be positive, got {m}"));
    }
    Ok(())
}

/// Full-information MD1 on linear losses `⟨l^k, x⟩`. Deterministic; `seed`
/// is recorded in the trace only.
pub fn run_experts_linear(
    env: &mut dyn LossEnvironment,
    steps: u64,
    seed: u64,
) -> Result<ExpertsRun> {
    let n = env.dim();
    let m = env.bound();
    check_run(n, steps, m)?;
    let mut state = DualState::adaptive(n, m)?;
    let mut trace = new_trace("experts-linear-md1", seed, n, steps, m);
    let mut sums = vec![0.0; n];
    let mut total = 0.0;
    for k in 1..=steps {
        let x = state.current_point();
        let loss = env.next_loss(AdversaryView {
            step: k,
            current: &x,
            past_actions: &[],
        })?;
        if loss.len() != n {
            return invalid(format!(
                "environment emitted {} losses for {n} experts",
                loss.len()
            ));
        }
        let grad = full_info_gradient(&loss, m)?;
        let incurred = x.dot(&loss);
        total += incurred;
        sums.iter_mut().zip(&loss).for_each(|(s, l)| *s += l);
        state.update(&grad)?;

        let mut rec = StepRecord::new(k, incurred, incurred);
        rec.grad_inf_norm = grad.inf_norm();
        rec.dual_checksum = state.dual().iter().sum();
        if trace.keeps_distributions() {
            rec.distribution = Some(x.into_weights());
        }
        trace.push(rec)?;
    }
    let spec = BoundSpec::new(BoundKind::T1Mean, m, n, steps);
    let report = RegretReport::new(total, &sums, &spec)?;
    Ok(ExpertsRun {
        expected: report.clone(),
        realized: report,
        trace,
    })
}

fn expert_losses<G: ExpertGame + ?Sized>(
    game: &G,
    omega: &[f64],
    strategies: &[Vec<f64>],
    m: f64,
) -> Result<Vec<f64>> {
    let losses: Vec<f64> = strategies.iter().map(|z| game.loss(omega, z)).collect();
    if let Some(v) = losses.iter().find(|v| !v.is_finite() || v.abs() > m) {
        return contract(format!("expert loss {v} violates the declared bound {m}"));
    }
    Ok(losses)
}

/// Convex losses: plays the mixture `Σ x_i ζ_i` and runs MD1 on the linear
/// surrogate `f_k(x) = Σ x_i λ(ω^k, ζ_i^k)`.
///
/// When `λ` is convex in its second argument, the realized regret never
/// exceeds the surrogate regret. `seed` is recorded only.
pub fn run_experts_convex<G: ExpertGame + ?Sized>(
    game: &mut G,
    steps: u64,
    seed: u64,
) -> Result<ExpertsRun> {
    let n = game.n_experts();
    let m = game.bound();
    check_run(n, steps, m)?;
    let mut state = DualState::adaptive(n, m)?;
    let mut trace = new_trace("experts-convex-md1", seed, n, steps, m);
    let mut sums = vec![0.0; n];
    let (mut realized, mut surrogate) = (0.0, 0.0);
    for k in 1..=steps {
        let x = state.current_point();
        let strategies = game.strategies(k)?;
        if strategies.len() != n {
            return invalid(format!("{} strategies for {n} experts", strategies.len()));
        }
        let omega = game.nature(AdversaryView {
            step: k,
            current: &x,
            past_actions: &[],
        })?;
        let losses = expert_losses(game, &omega, &strategies, m)?;
        let dim = strategies[0].len();
        let mut play = vec![0.0; dim];
        for (w, z) in x.weights().iter().zip(&strategies) {
            play.iter_mut().zip(z).for_each(|(p, zi)| *p += w * zi);
        }
        let incurred = game.loss(&omega, &play);
        let linear = x.dot(&losses);
        realized += incurred;
        surrogate += linear;
        sums.iter_mut().zip(&losses).for_each(|(s, l)| *s += l);
        let grad = full_info_gradient(&losses, m)?;
        state.update(&grad)?;

        let mut rec = StepRecord::new(k, incurred, linear);
        rec.grad_inf_norm = grad.inf_norm();
        rec.dual_checksum = state.dual().iter().sum();
        if trace.keeps_distributions() {
            rec.distribution = Some(x.into_weights());
        }
        trace.push(rec)?;
    }
    let spec = BoundSpec::new(BoundKind::T1Mean, m, n, steps);
    Ok(ExpertsRun {
        expected: RegretReport::new(surrogate, &sums, &spec)?,
        realized: RegretReport::new(realized, &sums, &spec)?,
        trace,
    })
}

/// Arbitrary (possibly non-convex) losses: MD2 samples one expert per step
/// from the exponential weights, plays its strategy, and updates with the
/// full vector of expert losses.
pub fn run_experts_nonconvex<G: ExpertGame + ?Sized>(
    game: &mut G,
    steps: u64,
    seed: u64,
) -> Result<ExpertsRun> {
    let n = game.n_experts();
    let m = game.bound();
    check_run(n, steps, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = DualState::adaptive(n, m)?;
    let mut trace = new_trace("experts-md2", seed, n, steps, m);
    let mut sums = vec![0.0; n];
    let (mut realized, mut expected) = (0.0, 0.0);
    let mut actions = Vec::with_capacity(steps as usize);
    for k in 1..=steps {
        let p: SimplexPoint = state.md2_distribution();
        let strategies = game.strategies(k)?;
        if strategies.len() != n {
            return invalid(format!("{} strategies for {n} experts", strategies.len()));
        }
        let omega = game.nature(AdversaryView {
            step: k,
            current: &p,
            past_actions: &actions,
        })?;
        let losses = expert_losses(game, &omega, &strategies, m)?;
        // The draw happens only after nature has committed to ω.
        let i = sample_categorical(p.weights(), &mut rng);
        realized += losses[i];
        let mean = p.dot(&losses);
        expected += mean;
        sums.iter_mut().zip(&losses).for_each(|(s, l)| *s += l);
        let grad = full_info_gradient(&losses, m)?;
        state.update(&grad)?;

        let mut rec = StepRecord::new(k, losses[i], mean);
        rec.action = Some(i);
        rec.grad_inf_norm = grad.inf_norm();
        rec.dual_checksum = state.dual().iter().sum();
        if trace.keeps_distributions() {
            rec.distribution = Some(p.into_weights());
        }
        trace.push(rec)?;
        actions.push(i);
    }
    let spec = BoundSpec::new(BoundKind::T2Mean, m, n, steps);
    Ok(ExpertsRun {
        expected: RegretReport::new(expected, &sums, &spec)?,
        realized: RegretReport::new(realized, &sums, &spec)?,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Adversary;

    #[test]
    fn constant_losses_meet_the_bound() {
        let mut env = Adversary::fixed_list(vec![vec![1.0, 0.0]; 10_000], 1.0).unwrap();
        let run = run_experts_linear(&mut env, 10_000, 0).unwrap();
        assert!(run.expected.pseudo_regret <= 2.0 * (2f64.ln() / 1e4).sqrt());
        assert!(run.expected.is_consistent());
    }

    #[test]
    fn identical_experts_have_zero_regret() {
        let rows: Vec<Vec<f64>> = (0..200).map(|k| vec![(k % 7) as f64 / 7.0; 3]).collect();
        let mut env = Adversary::fixed_list(rows.clone(), 1.0).unwrap();
        let run = run_experts_linear(&mut env, 200, 0).unwrap();
        assert!(run.expected.pseudo_regret.abs() < 1e-12);
        let mut env = Adversary::fixed_list(rows, 1.0).unwrap();
        let run = run_experts_nonconvex(&mut LinearExperts::new(&mut env), 200, 4).unwrap();
        assert!(run.realized.pseudo_regret.abs() < 1e-12);
        assert!(run.expected.pseudo_regret.abs() < 1e-12);
    }

    #[test]
    fn single_expert_is_rejected() {
        let mut env = Adversary::fixed_list(vec![vec![1.0]], 1.0).unwrap();
        assert!(run_experts_linear(&mut env, 1, 0).is_err());
    }

    #[test]
    fn bound_violation_is_a_contract_error() {
        struct Loud;
        impl LossEnvironment for Loud {
            fn dim(&self) -> usize {
                2
            }
            fn bound(&self) -> f64 {
                1.0
            }
            fn next_loss(&mut self, _: AdversaryView<'_>) -> Result<Vec<f64>> {
                Ok(vec![2.0, 0.0])
            }
        }
        assert!(matches!(
            run_experts_linear(&mut Loud, 5, 0),
            Err(crate::Error::Contract(_))
        ));
    }
}
