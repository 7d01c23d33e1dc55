//! Per-step regret bounds for the two steppers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::md::ProductSimplexSpec;

/// Which bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// MD1 in expectation: `2M √(ln n / N)`.
    #[serde(rename = "T1-mean")]
    T1Mean,
    /// MD1 with probability `1 − e^{−Ω}`: `(2M/√N)(√ln n + √(8Ω))`.
    #[serde(rename = "T1-highprob")]
    T1HighProb,
    /// MD2 in expectation: `2M √(ln n / N)`.
    #[serde(rename = "T2-mean")]
    T2Mean,
    /// MD2, stochastic losses: `(2M/√N)(√ln n + √(18Ω))`.
    #[serde(rename = "T2-highprob-general")]
    T2HighProbGeneral,
    /// MD2, deterministic losses: `(2M/√N)(√ln n + √(2Ω))`.
    #[serde(rename = "T2-highprob-det")]
    T2HighProbDet,
    /// MD2 with known horizon, deterministic losses: `(√2 M/√N)(√ln n + 2√Ω)`.
    #[serde(rename = "T2-nonadaptive-det")]
    T2NonadaptiveDet,
    /// MD1 over a product of scaled simplices:
    /// `(2M/√N)(√(max_j d_j · Σ_j d_j ln n_j) + (Σ_j d_j) √(8Ω))`.
    #[serde(rename = "R9-product")]
    R9Product,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::T1Mean,
        BoundKind::T1HighProb,
        BoundKind::T2Mean,
        BoundKind::T2HighProbGeneral,
        BoundKind::T2HighProbDet,
        BoundKind::T2NonadaptiveDet,
        BoundKind::R9Product,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BoundKind::T1Mean => "T1-mean",
            BoundKind::T1HighProb => "T1-highprob",
            BoundKind::T2Mean => "T2-mean",
            BoundKind::T2HighProbGeneral => "T2-highprob-general",
            BoundKind::T2HighProbDet => "T2-highprob-det",
            BoundKind::T2NonadaptiveDet => "T2-nonadaptive-det",
            BoundKind::R9Product => "R9-product",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown bound id {s:?}")))
    }
}

/// Parameters of one bound evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub kind: BoundKind,
    /// Gradient bound `M`.
    pub grad_bound: f64,
    /// Dimension `n` (ignored by [`BoundKind::R9Product`]).
    pub n: usize,
    /// Horizon `N`.
    pub steps: u64,
    /// Confidence exponent `Ω ≥ 0`; the failure probability is `e^{−Ω}`.
    #[serde(default)]
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<ProductSimplexSpec>,
}

impl BoundSpec {
    pub fn new(kind: BoundKind, grad_bound: f64, n: usize, steps: u64) -> Self {
        Self {
            kind,
            grad_bound,
            n,
            steps,
            omega: 0.0,
            blocks: None,
        }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    /// Sets `Ω = ln(1/σ)`.
    pub fn with_confidence(self, sigma: f64) -> Self {
        self.with_omega((1.0 / sigma).ln())
    }

    pub fn with_blocks(mut self, blocks: ProductSimplexSpec) -> Self {
        self.blocks = Some(blocks);
        self
    }
}

/// Per-step bound value for `spec`.
pub fn evaluate_bound(spec: &BoundSpec) -> Result<f64> {
    let m = spec.grad_bound;
    if !(m.is_finite() && m > 0.0) {
        return invalid(format!("gradient bound must be positive, got {m}"));
    }
    if spec.steps == 0 {
        return invalid("horizon must be positive");
    }
    if !(spec.omega.is_finite() && spec.omega >= 0.0) {
        return invalid(format!("omega must be nonnegative, got {}", spec.omega));
    }
    let n_steps = spec.steps as f64;
    let omega = spec.omega;
    if spec.kind == BoundKind::R9Product {
        let Some(blocks) = &spec.blocks else {
            return invalid("R9-product bound needs a block spec");
        };
        let range = blocks.max_mass() * blocks.potential_range();
        if range <= 0.0 {
            return invalid("product simplex needs a block with at least 2 coordinates");
        }
        return Ok(
            2.0 * m / n_steps.sqrt() * (range.sqrt() + blocks.total_mass() * (8.0 * omega).sqrt())
        );
    }
    if spec.n < 2 {
        return invalid(format!("dimension must be at least 2, got {}", spec.n));
    }
    let ln_n = (spec.n as f64).ln();
    let scale = 2.0 * m / n_steps.sqrt();
    Ok(match spec.kind {
        BoundKind::T1Mean | BoundKind::T2Mean => scale * ln_n.sqrt(),
        BoundKind::T1HighProb => scale * (ln_n.sqrt() + (8.0 * omega).sqrt()),
        BoundKind::T2HighProbGeneral => scale * (ln_n.sqrt() + (18.0 * omega).sqrt()),
        BoundKind::T2HighProbDet => scale * (ln_n.sqrt() + (2.0 * omega).sqrt()),
        BoundKind::T2NonadaptiveDet => {
            2f64.sqrt() * m / n_steps.sqrt() * (ln_n.sqrt() + 2.0 * omega.sqrt())
        }
        BoundKind::R9Product => unreachable!(),
    })
}
