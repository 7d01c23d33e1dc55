//! Entropic prox machinery on the simplex.
//!
//! With the entropy potential `V(x) = ln n + Σ x_i ln x_i`, the smoothed max
//! `W_β(y) = sup_x {⟨y, x⟩ − β V(x)} = β ln((1/n) Σ exp(y_i / β))` has the
//! softmax as its gradient. Every exponential is max-shifted so that dual
//! vectors growing linearly with the step count never overflow.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::simplex::SimplexPoint;

fn check_inputs(y: &[f64], beta: f64) -> Result<()> {
    if y.is_empty() {
        return invalid("dual vector must be non-empty");
    }
    if !(beta.is_finite() && beta > 0.0) {
        return invalid(format!("beta must be finite and positive, got {beta}"));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return invalid("dual vector has non-finite entries");
    }
    Ok(())
}

/// Softmax weights `exp(y_i/β) / Σ_l exp(y_l/β)` written into `out`.
///
/// No validation; callers guarantee finite `y` and positive `beta`.
pub(crate) fn softmax_into(y: &[f64], beta: f64, out: &mut Vec<f64>) {
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.clear();
    out.extend(y.iter().map(|v| ((v - max) / beta).exp()));
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|w| *w /= sum);
}

/// `∇W_β(y)`: the exponential-weights point for dual vector `y`.
pub fn softmax_prox(y: &[f64], beta: f64) -> Result<SimplexPoint> {
    check_inputs(y, beta)?;
    let mut out = Vec::with_capacity(y.len());
    softmax_into(y, beta, &mut out);
    Ok(SimplexPoint::from_raw(out, 1.0))
}

/// `W_β(y) = β ln((1/n) Σ exp(y_i/β))`.
///
/// Lies in `[max_i y_i − β ln n, max_i y_i]`.
pub fn smoothed_max(y: &[f64], beta: f64) -> Result<f64> {
    check_inputs(y, beta)?;
    let n = y.len() as f64;
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = y.iter().map(|v| ((v - max) / beta).exp()).sum();
    Ok(max + beta * (sum / n).ln())
}

/// Entropy distance from the uniform point, `ln n + Σ x_i ln x_i`, with `0 ln 0 = 0`.
pub fn entropy_v(x: &SimplexPoint) -> Result<f64> {
    if (x.mass() - 1.0).abs() > 1e-9 {
        return invalid(format!("entropy_v expects unit mass, got {}", x.mass()));
    }
    let n = x.dim() as f64;
    let neg_entropy: f64 = x
        .weights()
        .iter()
        .filter(|w| **w > 0.0)
        .map(|w| w * w.ln())
        .sum();
    // Clamp roundoff so the result stays in [0, ln n].
    Ok((n.ln() + neg_entropy).clamp(0.0, n.ln()))
}

/// A product of scaled simplices `Π_j S_{n_j}(d_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSimplexSpec {
    blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub size: usize,
    pub mass: f64,
}

impl ProductSimplexSpec {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return invalid("product simplex needs at least one block");
        }
        for b in &blocks {
            if b.size == 0 {
                return invalid("block size must be positive");
            }
            if !(b.mass.is_finite() && b.mass > 0.0) {
                return invalid(format!("block mass must be positive, got {}", b.mass));
            }
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Total dimension `Σ n_j`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// `Σ_j d_j ln n_j`: the maximum of the block-entropy potential.
    pub fn potential_range(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.mass * (b.size as f64).ln())
            .sum()
    }

    pub fn max_mass(&self) -> f64 {
        self.blocks.iter().map(|b| b.mass).fold(0.0, f64::max)
    }

    pub fn total_mass(&self) -> f64 {
        self.blocks.iter().map(|b| b.mass).sum()
    }
}

/// Block entropy `V(x) = Σ_j (d_j ln n_j + Σ_i z_i ln(z_i / d_j))`.
pub fn product_entropy(x: &[f64], spec: &ProductSimplexSpec) -> Result<f64> {
    if x.len() != spec.dim() {
        return invalid(format!(
            "point has length {}, spec dimension is {}",
            x.len(),
            spec.dim()
        ));
    }
    let mut offset = 0;
    let mut total = 0.0;
    for b in spec.blocks() {
        let z = &x[offset..offset + b.size];
        total += b.mass * (b.size as f64).ln()
            + z.iter()
                .filter(|w| **w > 0.0)
                .map(|w| w * (w / b.mass).ln())
                .sum::<f64>();
        offset += b.size;
    }
    Ok(total)
}

/// Prox map of the block entropy: maximizes `⟨y, x⟩ − β V(x)` over the product.
///
/// The mass `d_j` factors out of block `j`'s objective, so the block solution
/// is `d_j · softmax(y_j / β)`.
pub fn product_simplex_prox(
    y: &[f64],
    beta: f64,
    spec: &ProductSimplexSpec,
) -> Result<Vec<SimplexPoint>> {
    if y.len() != spec.dim() {
        return invalid(format!(
            "dual vector has length {}, spec dimension is {}",
            y.len(),
            spec.dim()
        ));
    }
    check_inputs(y, beta)?;
    let mut offset = 0;
    let mut out = Vec::with_capacity(spec.blocks().len());
    let mut buf = Vec::new();
    for b in spec.blocks() {
        softmax_into(&y[offset..offset + b.size], beta, &mut buf);
        let weights = buf.iter().map(|w| w * b.mass).collect();
        out.push(SimplexPoint::from_raw(weights, b.mass));
        offset += b.size;
    }
    Ok(out)
}
