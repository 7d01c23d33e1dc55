//! Randomized solver for zero-sum matrix games.
//!
//! Both players run MD2 with the known-horizon schedule: the row player
//! maximizes `⟨ω, A x⟩`, the column player minimizes it. Each iteration both
//! players draw a pure strategy from their current exponential weights, then
//! the column player absorbs row `i` of `A` and the row player absorbs column
//! `j`. An iteration therefore touches only `nnz(row i) + nnz(col j)` entries;
//! weights live in sum trees so sampling and updates stay `O(s log n)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::SparseGameMatrix;
use crate::analysis::{
    evaluate_bound, BoundKind, BoundSpec, ReadCounter, RunTrace, Scope, StepRecord, TraceMeta,
};
use crate::error::{invalid, Result};
use crate::md::{nonadaptive_gamma, LazyExpWeights, Objective};
use crate::simplex::SimplexPoint;

/// Averaged strategies returned by [`solve_matrix_game`] and their certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSolution {
    /// Column (minimizing) player's empirical mixed strategy.
    pub x_bar: SimplexPoint,
    /// Row (maximizing) player's empirical mixed strategy.
    pub omega_bar: SimplexPoint,
    /// `max_i (A x̄)_i − min_j (ω̄ᵀA)_j`.
    pub gap: f64,
    /// `min_j (ω̄ᵀA)_j`, a lower bound on the game value.
    pub lower_value: f64,
    /// `max_i (A x̄)_i`, an upper bound on the game value.
    pub upper_value: f64,
    /// `⟨ω̄, A x̄⟩`.
    pub mixed_payoff: f64,
    /// Mean realized payoff `(1/N) Σ a_{i_k j_k}`.
    pub average_payoff: f64,
    pub iterations: u64,
    /// Matrix entries read by the solver (the gap evaluation is excluded).
    pub elements_read: u64,
    /// Entries read by the post-hoc gap evaluation.
    pub verify_reads: u64,
    pub epsilon: f64,
    pub sigma: f64,
    pub seed: u64,
    /// Factor the entries were multiplied by so that `max |a_ij| ≤ 1`.
    pub scale: f64,
    /// Per-player regret bound holding with probability `1 − σ`, in the
    /// units of the original matrix.
    pub per_player_bound: f64,
}

/// Both sides of the duality gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapEvaluation {
    pub upper: f64,
    pub lower: f64,
    pub mixed_payoff: f64,
    pub gap: f64,
}

/// `⌈8 (ln n + 2 ln σ⁻¹) / ε²⌉`, the iteration count for an `ε` gap with
/// probability `1 − σ` on a matrix with entries in `[−1, 1]`.
pub fn game_iterations(n: usize, epsilon: f64, sigma: f64) -> Result<u64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return invalid(format!("epsilon must be positive, got {epsilon}"));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return invalid(format!("sigma must lie in (0, 1), got {sigma}"));
    }
    if n < 2 {
        return invalid(format!("dimension must be at least 2, got {n}"));
    }
    let n_iter = 8.0 * ((n as f64).ln() + 2.0 * (1.0 / sigma).ln()) / (epsilon * epsilon);
    Ok(n_iter.ceil() as u64)
}

/// Duality gap with read accounting under [`Scope::Verify`]; one pass over
/// the stored entries.
pub fn duality_gap_counted(
    a: &SparseGameMatrix,
    x_bar: &SimplexPoint,
    omega_bar: &SimplexPoint,
    counter: &mut ReadCounter,
) -> Result<GapEvaluation> {
    if x_bar.dim() != a.n_cols() || omega_bar.dim() != a.n_rows() {
        return invalid(format!(
            "strategies of sizes ({}, {}) do not fit a {}x{} matrix",
            omega_bar.dim(),
            x_bar.dim(),
            a.n_rows(),
            a.n_cols()
        ));
    }
    let mut ax = vec![0.0; a.n_rows()];
    let mut wa = vec![0.0; a.n_cols()];
    for (i, j, v) in a.entries(counter, Scope::Verify) {
        ax[i] += v * x_bar[j];
        wa[j] += v * omega_bar[i];
    }
    let upper = ax.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lower = wa.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GapEvaluation {
        upper,
        lower,
        mixed_payoff: omega_bar.dot(&ax),
        gap: upper - lower,
    })
}

/// `max_i (A x̄)_i − min_j (ω̄ᵀA)_j`; zero exactly at a Nash equilibrium.
pub fn duality_gap(
    a: &SparseGameMatrix,
    x_bar: &SimplexPoint,
    omega_bar: &SimplexPoint,
) -> Result<f64> {
    Ok(duality_gap_counted(a, x_bar, omega_bar, &mut ReadCounter::new())?.gap)
}

/// Solves `min_x max_ω ⟨ω, A x⟩` to duality gap `ε` with probability about
/// `1 − σ`, running [`game_iterations`] steps.
///
/// Matrices with `max |a_ij| > 1` are scaled to unit bound first (and `ε` with
/// them); the reported gap is for the original matrix.
pub fn solve_matrix_game(
    a: &SparseGameMatrix,
    epsilon: f64,
    sigma: f64,
    seed: u64,
) -> Result<GameSolution> {
    GameRun::new(a, epsilon, sigma, seed)?.run(None)
}

/// As [`solve_matrix_game`], also recording a per-iteration trace.
pub fn solve_matrix_game_traced(
    a: &SparseGameMatrix,
    epsilon: f64,
    sigma: f64,
    seed: u64,
) -> Result<(GameSolution, RunTrace)> {
    let run = GameRun::new(a, epsilon, sigma, seed)?;
    let mut trace = RunTrace::new(TraceMeta {
        algorithm: "game-md2-nonadaptive".into(),
        seed,
        n: a.n_cols(),
        steps: run.iterations,
        grad_bound: 1.0,
    });
    let solution = run.run(Some(&mut trace))?;
    Ok((solution, trace))
}

struct GameRun<'a> {
    original: &'a SparseGameMatrix,
    scaled: Option<SparseGameMatrix>,
    scale: f64,
    epsilon: f64,
    sigma: f64,
    seed: u64,
    iterations: u64,
}

impl<'a> GameRun<'a> {
    fn new(a: &'a SparseGameMatrix, epsilon: f64, sigma: f64, seed: u64) -> Result<Self> {
        if a.n_rows() < 2 || a.n_cols() < 2 {
            return invalid(format!(
                "both players need at least 2 strategies, matrix is {}x{}",
                a.n_rows(),
                a.n_cols()
            ));
        }
        let n = a.n_rows().max(a.n_cols());
        let (scale, scaled) = if a.bound() > 1.0 {
            (1.0 / a.bound(), Some(a.scaled(1.0 / a.bound())))
        } else {
            (1.0, None)
        };
        let iterations = game_iterations(n, epsilon * scale, sigma)?;
        Ok(Self {
            original: a,
            scaled,
            scale,
            epsilon,
            sigma,
            seed,
            iterations,
        })
    }

    fn run(self, mut trace: Option<&mut RunTrace>) -> Result<GameSolution> {
        let a = self.scaled.as_ref().unwrap_or(self.original);
        let n_iter = self.iterations;
        let (n_rows, n_cols) = (a.n_rows(), a.n_cols());
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut rows = LazyExpWeights::new(
            n_rows,
            nonadaptive_gamma(n_iter, 1.0, n_rows)?,
            Objective::Maximize,
        )?;
        let mut cols = LazyExpWeights::new(
            n_cols,
            nonadaptive_gamma(n_iter, 1.0, n_cols)?,
            Objective::Minimize,
        )?;
        let mut row_counts = vec![0u64; n_rows];
        let mut col_counts = vec![0u64; n_cols];
        let mut counter = ReadCounter::new();
        let mut payoff_sum = 0.0;

        for k in 1..=n_iter {
            let before = counter.get(Scope::Solver);
            let i = rows.sample(&mut rng);
            let j = cols.sample(&mut rng);
            let (row_idx, row_val) = a.row(i, &mut counter, Scope::Solver);
            let payoff = row_idx.binary_search(&j).map_or(0.0, |p| row_val[p]);
            cols.apply(row_idx.iter().copied().zip(row_val.iter().copied()));
            let (col_idx, col_val) = a.col(j, &mut counter, Scope::Solver);
            rows.apply(col_idx.iter().copied().zip(col_val.iter().copied()));
            row_counts[i] += 1;
            col_counts[j] += 1;
            payoff_sum += payoff;
            if let Some(t) = trace.as_deref_mut() {
                let mut rec = StepRecord::new(k, payoff / self.scale, payoff / self.scale);
                rec.action = Some(j);
                rec.grad_inf_norm = row_val.iter().fold(0.0, |m, v| m.max(v.abs()));
                rec.dual_checksum = cols.dual().iter().sum();
                rec.reads_solver = counter.get(Scope::Solver) - before;
                t.push(rec)?;
            }
        }

        let freq =
            |counts: &[u64]| SimplexPoint::normalize(counts.iter().map(|c| *c as f64).collect());
        let x_bar = freq(&col_counts)?;
        let omega_bar = freq(&row_counts)?;
        let eval = duality_gap_counted(self.original, &x_bar, &omega_bar, &mut counter)?;
        if let Some(t) = trace {
            if let Some(last) = t.last_mut() {
                last.gap = Some(eval.gap);
                last.reads_verify = counter.get(Scope::Verify);
            }
        }
        let n = n_rows.max(n_cols);
        let per_player_bound = evaluate_bound(
            &BoundSpec::new(BoundKind::T2NonadaptiveDet, 1.0, n, n_iter)
                .with_confidence(self.sigma),
        )? / self.scale;
        Ok(GameSolution {
            x_bar,
            omega_bar,
            gap: eval.gap,
            lower_value: eval.lower,
            upper_value: eval.upper,
            mixed_payoff: eval.mixed_payoff,
            average_payoff: payoff_sum / n_iter as f64 / self.scale,
            iterations: n_iter,
            elements_read: counter.get(Scope::Solver),
            verify_reads: counter.get(Scope::Verify),
            epsilon: self.epsilon,
            sigma: self.sigma,
            seed: self.seed,
            scale: self.scale,
            per_player_bound,
        })
    }
}
