//! Points on (scaled) probability simplices and subgradient samples.

use serde::{Deserialize, Serialize};

use crate::error::{contract, invalid, Result};

/// Relative tolerance on the mass of a [`SimplexPoint`].
pub const MASS_RTOL: f64 = 1e-9;

/// A nonnegative vector whose entries sum to `mass`.
///
/// Unit-mass points are probability distributions; scaled points appear as
/// the blocks of a product of simplices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    weights: Vec<f64>,
    mass: f64,
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>, mass: f64) -> Result<Self> {
        if weights.is_empty() {
            return invalid("simplex point must have at least one coordinate");
        }
        if !(mass.is_finite() && mass > 0.0) {
            return invalid(format!("mass must be finite and positive, got {mass}"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return invalid(format!(
                "simplex weights must be finite and nonnegative, got {w}"
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - mass).abs() > MASS_RTOL * mass {
            return invalid(format!("weights sum to {sum}, expected mass {mass}"));
        }
        Ok(Self { weights, mass })
    }

    /// Probability distribution (mass 1).
    pub fn probability(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, 1.0)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("dimension must be positive");
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
            mass: 1.0,
        })
    }

    /// The vertex `e_index` of the unit simplex in dimension `n`.
    pub fn vertex(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return invalid(format!("vertex index {index} out of range for n = {n}"));
        }
        let mut weights = vec![0.0; n];
        weights[index] = 1.0;
        Ok(Self { weights, mass: 1.0 })
    }

    /// Normalizes a nonnegative vector with positive sum to unit mass.
    pub fn normalize(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return invalid("cannot normalize a vector with non-positive or non-finite sum");
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect(), 1.0)
    }

    /// Builds a point from weights that are already known to be valid
    /// (outputs of the prox maps).
    pub(crate) fn from_raw(weights: Vec<f64>, mass: f64) -> Self {
        debug_assert!(weights.iter().all(|w| *w >= 0.0));
        debug_assert!({
            let s: f64 = weights.iter().sum();
            (s - mass).abs() <= 1e-9 * mass.max(1.0)
        });
        Self { weights, mass }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.weights.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

impl std::ops::Index<usize> for SimplexPoint {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.weights[i]
    }
}

/// Storage for the entries of a [`SubgradientSample`].
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Dense(Vec<f64>),
    /// `(index, value)` pairs over a vector of length `dim`. Indices are unique.
    Sparse {
        dim: usize,
        nonzeros: Vec<(usize, f64)>,
    },
}

/// A (possibly sparse) subgradient together with the ∞-norm bound certified
/// for the run that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgradientSample {
    entries: Entries,
    inf_norm_bound: f64,
}

impl SubgradientSample {
    pub fn dense(entries: Vec<f64>, inf_norm_bound: f64) -> Result<Self> {
        Self::new(Entries::Dense(entries), inf_norm_bound)
    }

    pub fn sparse(dim: usize, nonzeros: Vec<(usize, f64)>, inf_norm_bound: f64) -> Result<Self> {
        if let Some((i, _)) = nonzeros.iter().find(|(i, _)| *i >= dim) {
            return invalid(format!("sparse index {i} out of range for dimension {dim}"));
        }
        Self::new(Entries::Sparse { dim, nonzeros }, inf_norm_bound)
    }

    fn new(entries: Entries, inf_norm_bound: f64) -> Result<Self> {
        if !(inf_norm_bound.is_finite() && inf_norm_bound > 0.0) {
            return invalid(format!(
                "inf-norm bound must be positive, got {inf_norm_bound}"
            ));
        }
        let sample = Self {
            entries,
            inf_norm_bound,
        };
        let norm = sample.inf_norm();
        if !norm.is_finite() {
            return invalid("subgradient has non-finite entries");
        }
        if norm > inf_norm_bound * (1.0 + 1e-12) {
            return contract(format!(
                "subgradient inf-norm {norm} exceeds declared bound {inf_norm_bound}"
            ));
        }
        Ok(sample)
    }

    pub fn dim(&self) -> usize {
        match &self.entries {
            Entries::Dense(v) => v.len(),
            Entries::Sparse { dim, .. } => *dim,
        }
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn inf_norm_bound(&self) -> f64 {
        self.inf_norm_bound
    }

    pub fn inf_norm(&self) -> f64 {
        match &self.entries {
            Entries::Dense(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Entries::Sparse { nonzeros, .. } => {
                nonzeros.iter().fold(0.0, |m, (_, x)| m.max(x.abs()))
            }
        }
    }

    /// Calls `f(i, g_i)` for every stored entry.
    pub fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        match &self.entries {
            Entries::Dense(v) => v.iter().enumerate().for_each(|(i, x)| f(i, *x)),
            Entries::Sparse { nonzeros, .. } => nonzeros.iter().for_each(|(i, x)| f(*i, *x)),
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.for_each(|i, x| out[i] += x);
        out
    }

    /// ⟨g, x⟩.
    pub fn dot(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        self.for_each(|i, g| acc += g * x[i]);
        acc
    }
}
