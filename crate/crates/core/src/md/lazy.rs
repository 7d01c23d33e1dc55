//! Exponential weights under sparse dual updates.
//!
//! Keeps `w_i = exp(scale · y_i − shift)` in a binary sum tree so that changing
//! `k` coordinates of `y` costs `O(k log n)` and drawing a vertex costs
//! `O(log n)`. The shift is re-centred whenever a weight drifts outside
//! `[e^-RANGE, e^RANGE]` relative to it, which keeps every stored weight finite.
//! Sampled indices follow `softmax(scale · y)` exactly as the dense
//! [`DualState::md2_distribution`](super::DualState::md2_distribution) does.

use rand::Rng;

use super::dual::Objective;
use crate::error::{invalid, Result};
use crate::simplex::SimplexPoint;

const RANGE: f64 = 300.0;

#[derive(Debug, Clone)]
pub struct LazyExpWeights {
    y: Vec<f64>,
    scale: f64,
    shift: f64,
    sign: f64,
    /// Implicit complete binary tree; leaves start at `leaves`.
    tree: Vec<f64>,
    leaves: usize,
    rebuilds: u64,
}

impl LazyExpWeights {
    /// Fresh state (`y = 0`) of dimension `n` with inverse temperature `scale`.
    pub fn new(n: usize, scale: f64, objective: Objective) -> Result<Self> {
        if n < 2 {
            return invalid(format!("dimension must be at least 2, got {n}"));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return invalid(format!("scale must be finite and positive, got {scale}"));
        }
        let leaves = n.next_power_of_two();
        let mut s = Self {
            y: vec![0.0; n],
            scale,
            shift: 0.0,
            sign: match objective {
                Objective::Minimize => -1.0,
                Objective::Maximize => 1.0,
            },
            tree: vec![0.0; 2 * leaves],
            leaves,
            rebuilds: 0,
        };
        s.rebuild();
        s.rebuilds = 0;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.y.len()
    }

    pub fn dual(&self) -> &[f64] {
        &self.y
    }

    /// Number of full re-centring passes performed so far.
    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    fn rebuild(&mut self) {
        let max = self
            .y
            .iter()
            .map(|v| v * self.scale)
            .fold(f64::NEG_INFINITY, f64::max);
        self.shift = max;
        for (i, v) in self.y.iter().enumerate() {
            self.tree[self.leaves + i] = (v * self.scale - max).exp();
        }
        for node in (1..self.leaves).rev() {
            self.tree[node] = self.tree[2 * node] + self.tree[2 * node + 1];
        }
        self.rebuilds += 1;
    }

    fn set_leaf(&mut self, i: usize, w: f64) {
        let mut node = self.leaves + i;
        self.tree[node] = w;
        while node > 1 {
            node /= 2;
            self.tree[node] = self.tree[2 * node] + self.tree[2 * node + 1];
        }
    }

    /// Applies `y_i ← y_i ∓ g_i` (sign from the objective) for each `(i, g_i)`.
    pub fn apply<I: IntoIterator<Item = (usize, f64)>>(&mut self, grad: I) {
        let mut recentre = false;
        for (i, g) in grad {
            self.y[i] += self.sign * g;
            let exponent = self.y[i] * self.scale - self.shift;
            if exponent > RANGE {
                recentre = true;
            } else {
                self.set_leaf(i, exponent.exp());
            }
        }
        if recentre || self.tree[1] < (-RANGE).exp() {
            self.rebuild();
        }
    }

    /// Draws an index from `softmax(scale · y)` with one uniform variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut target = rng.random::<f64>() * self.tree[1];
        let mut node = 1;
        while node < self.leaves {
            let left = self.tree[2 * node];
            if target < left || self.tree[2 * node + 1] <= 0.0 {
                node *= 2;
            } else {
                target -= left;
                node = 2 * node + 1;
            }
        }
        (node - self.leaves).min(self.y.len() - 1)
    }

    /// Dense distribution; `O(n)`, for verification only.
    pub fn distribution(&self) -> SimplexPoint {
        let total: f64 = self.tree[self.leaves..self.leaves + self.y.len()]
            .iter()
            .sum();
        let w = self.tree[self.leaves..self.leaves + self.y.len()]
            .iter()
            .map(|w| w / total)
            .collect();
        SimplexPoint::from_raw(w, 1.0)
    }
}
