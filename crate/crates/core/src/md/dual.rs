//! Dual-averaging state shared by the full-point stepper (MD1) and the
//! vertex-sampling stepper (MD2).

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::prox::softmax_into;
use super::sampling::sample_categorical;
use super::schedule::{adaptive_beta, nonadaptive_gamma, Schedule};
use crate::error::{invalid, Error, Result};
use crate::simplex::{SimplexPoint, SubgradientSample};

/// Whether the run minimizes losses or maximizes payoffs.
///
/// Maximization accumulates `+g` instead of `−g`; everything else is shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    #[default]
    Minimize,
    Maximize,
}

/// Full state of one mirror-descent run: accumulated dual vector `y`, step
/// counter, gradient bound and schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualState {
    y: Vec<f64>,
    t: u64,
    grad_bound: f64,
    schedule: Schedule,
    objective: Objective,
    /// Cached `γ` for the nonadaptive schedule.
    gamma: f64,
}

impl DualState {
    pub fn new(n: usize, grad_bound: f64, schedule: Schedule) -> Result<Self> {
        let gamma = match schedule {
            // Validates n and M as a side effect.
            Schedule::Adaptive => {
                adaptive_beta(1, grad_bound, n)?;
                1.0
            }
            Schedule::Nonadaptive { horizon } => nonadaptive_gamma(horizon, grad_bound, n)?,
        };
        Ok(Self {
            y: vec![0.0; n],
            t: 0,
            grad_bound,
            schedule,
            objective: Objective::Minimize,
            gamma,
        })
    }

    pub fn adaptive(n: usize, grad_bound: f64) -> Result<Self> {
        Self::new(n, grad_bound, Schedule::Adaptive)
    }

    pub fn nonadaptive(n: usize, grad_bound: f64, horizon: u64) -> Result<Self> {
        Self::new(n, grad_bound, Schedule::Nonadaptive { horizon })
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    /// Number of updates applied so far.
    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn grad_bound(&self) -> f64 {
        self.grad_bound
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Accumulated dual vector (`−Σ g_k` when minimizing, `+Σ g_k` when maximizing).
    pub fn dual(&self) -> &[f64] {
        &self.y
    }

    /// Multiplier applied to `y` before a unit-temperature softmax, i.e. the
    /// inverse temperature of the next play.
    pub fn inverse_temperature(&self) -> f64 {
        match self.schedule {
            Schedule::Adaptive => {
                let n = self.y.len() as f64;
                n.ln().sqrt() / (self.grad_bound * ((self.t + 1) as f64).sqrt())
            }
            Schedule::Nonadaptive { .. } => self.gamma,
        }
    }

    /// Adds one subgradient to the dual vector and advances the step counter.
    pub fn update(&mut self, grad: &SubgradientSample) -> Result<()> {
        if grad.dim() != self.y.len() {
            return invalid(format!(
                "gradient has dimension {}, state has {}",
                grad.dim(),
                self.y.len()
            ));
        }
        if let Schedule::Nonadaptive { horizon } = self.schedule {
            if self.t >= horizon {
                return Err(Error::InvalidState(format!(
                    "nonadaptive run already used its horizon of {horizon} steps"
                )));
            }
        }
        let sign = match self.objective {
            Objective::Minimize => -1.0,
            Objective::Maximize => 1.0,
        };
        let y = &mut self.y;
        grad.for_each(|i, g| y[i] += sign * g);
        self.t += 1;
        Ok(())
    }

    /// The point prescribed for the next step: `∇W_{β_{t+1}}(y)` under the
    /// adaptive schedule, `softmax(γ y)` under the nonadaptive one. The fresh
    /// state maps to the uniform point.
    pub fn current_point(&self) -> SimplexPoint {
        let mut out = Vec::with_capacity(self.y.len());
        softmax_into(&self.y, 1.0 / self.inverse_temperature(), &mut out);
        SimplexPoint::from_raw(out, 1.0)
    }

    /// MD1: absorbs `grad` and returns the point to play at step `t + 1`.
    pub fn md1_step(&mut self, grad: &SubgradientSample) -> Result<SimplexPoint> {
        self.update(grad)?;
        Ok(self.current_point())
    }

    /// MD2 sampling distribution for the next step.
    pub fn md2_distribution(&self) -> SimplexPoint {
        self.current_point()
    }

    /// MD2: draws the vertex to play from [`Self::md2_distribution`].
    pub fn md2_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, SimplexPoint) {
        let p = self.md2_distribution();
        let i = sample_categorical(p.weights(), rng);
        (i, p)
    }
}
