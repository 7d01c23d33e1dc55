//! Categorical and Gumbel-max sampling.

use rand::distr::Open01;
use rand::Rng;

use crate::error::{invalid, Result};

/// Draws an index with probability proportional to `weights` by inverting the CDF.
///
/// Weights must be nonnegative with a positive finite sum. A single uniform
/// draw is consumed per call.
pub fn sample_categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.iter().enumerate() {
        if *w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    // Roundoff can leave `target` a hair above the final partial sum.
    last_positive
}

/// Standard Gumbel draw scaled by `beta`: `−β ln(−ln U)`, `U ~ Uniform(0, 1)` open.
pub fn gumbel<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -beta * (-u.ln()).ln()
}

/// `argmax_i (y_i + ζ_i)` with i.i.d. Gumbel noise of scale `beta`.
///
/// The returned index is distributed as `softmax(y / β)`. Ties go to the
/// lowest index.
pub fn gumbel_argmax_sample<R: Rng + ?Sized>(y: &[f64], beta: f64, rng: &mut R) -> Result<usize> {
    if y.is_empty() {
        return invalid("dual vector must be non-empty");
    }
    if !(beta.is_finite() && beta > 0.0) {
        return invalid(format!("beta must be finite and positive, got {beta}"));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return invalid("dual vector has non-finite entries");
    }
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in y.iter().enumerate() {
        let perturbed = v + gumbel(beta, rng);
        if perturbed > best_val {
            best = i;
            best_val = perturbed;
        }
    }
    Ok(best)
}
