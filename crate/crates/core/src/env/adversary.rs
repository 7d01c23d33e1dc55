use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::simplex::SimplexPoint;

/// What an environment may look at when choosing the loss of step `step`.
///
/// `current` is the distribution the learner is about to sample from (or the
/// point it will play, for full-point learners). The realized draw of the
/// current step does not exist yet when the view is built.
#[derive(Debug, Clone, Copy)]
pub struct AdversaryView<'a> {
    /// 1-based step index.
    pub step: u64,
    pub current: &'a SimplexPoint,
    /// Realized plays of steps `1..step`.
    pub past_actions: &'a [usize],
}

/// A source of loss vectors bounded by [`LossEnvironment::bound`] in ∞-norm.
pub trait LossEnvironment {
    fn dim(&self) -> usize;

    /// `M` with `‖l^k‖_∞ ≤ M` for every emitted loss.
    fn bound(&self) -> f64;

    fn next_loss(&mut self, view: AdversaryView<'_>) -> Result<Vec<f64>>;

    /// Per-coordinate expected loss, for stationary stochastic environments.
    fn mean_loss(&self) -> Option<&[f64]> {
        None
    }
}

/// Built-in loss generators.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Adversary {
    /// Replays a fixed list of loss vectors.
    FixedList { losses: Vec<Vec<f64>>, bound: f64 },
    /// Independent Bernoulli losses with the given means.
    Bernoulli { means: Vec<f64>, rng: ChaCha8Rng },
    /// Loss 1 on the highest-probability coordinate of the current
    /// distribution (lowest index on ties), 0 elsewhere.
    BestResponse { n: usize },
}

impl Adversary {
    pub fn fixed_list(losses: Vec<Vec<f64>>, bound: f64) -> Result<Self> {
        let Some(first) = losses.first() else {
            return invalid("loss list is empty");
        };
        let n = first.len();
        if losses.iter().any(|l| l.len() != n) {
            return invalid("loss rows have inconsistent lengths");
        }
        if !(bound.is_finite() && bound > 0.0) {
            return invalid("loss bound must be positive");
        }
        if let Some(v) = losses
            .iter()
            .flatten()
            .find(|v| !v.is_finite() || v.abs() > bound)
        {
            return Err(Error::Contract(format!(
                "loss entry {v} exceeds bound {bound}"
            )));
        }
        Ok(Adversary::FixedList { losses, bound })
    }

    pub fn bernoulli(means: Vec<f64>, seed: u64) -> Result<Self> {
        if means.is_empty() {
            return invalid("need at least one arm");
        }
        if means.iter().any(|m| !(0.0..=1.0).contains(m)) {
            return invalid("Bernoulli means must lie in [0, 1]");
        }
        Ok(Adversary::Bernoulli {
            means,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn best_response(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("dimension must be positive");
        }
        Ok(Adversary::BestResponse { n })
    }
}

impl LossEnvironment for Adversary {
    fn dim(&self) -> usize {
        match self {
            Adversary::FixedList { losses, .. } => losses[0].len(),
            Adversary::Bernoulli { means, .. } => means.len(),
            Adversary::BestResponse { n } => *n,
        }
    }

    fn bound(&self) -> f64 {
        match self {
            Adversary::FixedList { bound, .. } => *bound,
            _ => 1.0,
        }
    }

    fn next_loss(&mut self, view: AdversaryView<'_>) -> Result<Vec<f64>> {
        match self {
            Adversary::FixedList { losses, .. } => {
                let k = view.step as usize;
                losses.get(k.wrapping_sub(1)).cloned().ok_or_else(|| {
                    Error::InvalidState(format!(
                        "loss list has {} rows, step {k} requested",
                        losses.len()
                    ))
                })
            }
            Adversary::Bernoulli { means, rng } => Ok(means
                .iter()
                .map(|m| if rng.random::<f64>() < *m { 1.0 } else { 0.0 })
                .collect()),
            Adversary::BestResponse { n } => {
                let p = view.current.weights();
                let mut best = 0;
                for (i, w) in p.iter().enumerate() {
                    if *w > p[best] {
                        best = i;
                    }
                }
                let mut l = vec![0.0; *n];
                l[best] = 1.0;
                Ok(l)
            }
        }
    }

    fn mean_loss(&self) -> Option<&[f64]> {
        match self {
            Adversary::Bernoulli { means, .. } => Some(means),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view(p: &SimplexPoint, step: u64) -> AdversaryView<'_> {
        AdversaryView {
            step,
            current: p,
            past_actions: &[],
        }
    }

    #[test]
    fn best_response_breaks_ties_low() {
        let mut adv = Adversary::best_response(2).unwrap();
        let p = SimplexPoint::uniform(2).unwrap();
        assert_eq!(adv.next_loss(view(&p, 1)).unwrap(), vec![1.0, 0.0]);
        let q = SimplexPoint::probability(vec![0.2, 0.5, 0.3]).unwrap();
        let mut adv = Adversary::best_response(3).unwrap();
        assert_eq!(adv.next_loss(view(&q, 1)).unwrap(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn fixed_list_replays() {
        let rows = vec![vec![0.0, 1.0], vec![0.5, -0.5], vec![1.0, 1.0]];
        let mut adv = Adversary::fixed_list(rows.clone(), 1.0).unwrap();
        let p = SimplexPoint::uniform(2).unwrap();
        for (k, row) in rows.iter().enumerate() {
            assert_eq!(&adv.next_loss(view(&p, k as u64 + 1)).unwrap(), row);
        }
        assert!(adv.next_loss(view(&p, 4)).is_err());
        assert!(Adversary::fixed_list(vec![vec![2.0]], 1.0).is_err());
        assert!(Adversary::fixed_list(vec![vec![0.0], vec![0.0, 1.0]], 1.0).is_err());
    }

    #[test]
    fn bernoulli_means_concentrate() {
        let mut adv = Adversary::bernoulli(vec![0.2, 0.8], 17).unwrap();
        let p = SimplexPoint::uniform(2).unwrap();
        let draws = 10_000;
        let mut sums = [0.0; 2];
        for k in 0..draws {
            let l = adv.next_loss(view(&p, k + 1)).unwrap();
            sums[0] += l[0];
            sums[1] += l[1];
        }
        for (s, m) in sums.iter().zip([0.2, 0.8]) {
            let sd = (draws as f64 * m * (1.0 - m)).sqrt();
            assert!((s - draws as f64 * m).abs() <= 4.0 * sd);
        }
        assert!(Adversary::bernoulli(vec![1.2], 0).is_err());
    }
}
