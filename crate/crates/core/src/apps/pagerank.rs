//! Stationary vector of a row-stochastic matrix through the game solver.
//!
//! The stationary `x` with `Pᵀx = x` solves `min_x max_i ((Pᵀ − I) x)_i`,
//! whose value is 0. Any `x̄` from a game solution with gap `ε` therefore has
//! `max_i ((Pᵀ − I) x̄)_i ≤ ε`.

use serde::{Deserialize, Serialize};

use super::game::{solve_matrix_game, GameSolution};
use super::matrix::SparseGameMatrix;
use crate::error::{invalid, Result};
use crate::simplex::SimplexPoint;

/// Row sums must equal 1 within this tolerance.
pub const STOCHASTIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRankSolution {
    pub x_bar: SimplexPoint,
    /// `max_i ((Pᵀ − I) x̄)_i`.
    pub residual: f64,
    pub game: GameSolution,
}

/// `Pᵀ − I` as a game matrix; entries stay in `[−1, 1]`.
pub fn pagerank_game_matrix(p: &SparseGameMatrix) -> Result<SparseGameMatrix> {
    if p.n_rows() != p.n_cols() {
        return invalid(format!(
            "transition matrix must be square, got {}x{}",
            p.n_rows(),
            p.n_cols()
        ));
    }
    p.check_row_stochastic(STOCHASTIC_TOL)?;
    let n = p.n_rows();
    let mut triplets: Vec<(usize, usize, f64)> = p
        .to_triplets()
        .into_iter()
        .map(|(i, j, v)| (j, i, v))
        .collect();
    triplets.extend((0..n).map(|i| (i, i, -1.0)));
    SparseGameMatrix::from_triplets(n, n, triplets)
}

/// `max_i ((Pᵀ − I) x)_i`, computed densely.
pub fn stationarity_residual(p: &SparseGameMatrix, x: &SimplexPoint) -> Result<f64> {
    if p.n_rows() != x.dim() || p.n_cols() != x.dim() {
        return invalid(format!(
            "point of size {} does not fit a {}x{} matrix",
            x.dim(),
            p.n_rows(),
            p.n_cols()
        ));
    }
    let mut ptx: Vec<f64> = x.weights().iter().map(|v| -v).collect();
    for (i, j, v) in p.to_triplets() {
        ptx[j] += v * x[i];
    }
    Ok(ptx.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Full solve, keeping the game certificate alongside the vector.
pub fn pagerank_solve(
    p: &SparseGameMatrix,
    epsilon: f64,
    sigma: f64,
    seed: u64,
) -> Result<PageRankSolution> {
    let a = pagerank_game_matrix(p)?;
    let game = solve_matrix_game(&a, epsilon, sigma, seed)?;
    let x_bar = game.x_bar.clone();
    Ok(PageRankSolution {
        residual: stationarity_residual(p, &x_bar)?,
        x_bar,
        game,
    })
}

/// Approximate stationary distribution of `p` with residual at most `ε`
/// with probability about `1 − σ`.
pub fn pagerank_via_game(
    p: &SparseGameMatrix,
    epsilon: f64,
    sigma: f64,
    seed: u64,
) -> Result<SimplexPoint> {
    Ok(pagerank_solve(p, epsilon, sigma, seed)?.x_bar)
}
