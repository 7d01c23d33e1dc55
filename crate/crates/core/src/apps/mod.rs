//! Applications assembled from the steppers: bandits, expert weighting,
//! sparse matrix games and PageRank.

mod bandit;
mod experts;
mod game;
mod matrix;
mod pagerank;

pub use bandit::{run_bandit, BanditRun};
pub use experts::{
    run_experts_convex, run_experts_linear, run_experts_nonconvex, ExpertGame, ExpertsRun,
    LinearExperts,
};
pub use game::{
    duality_gap, duality_gap_counted, game_iterations, solve_matrix_game, solve_matrix_game_traced,
    GameSolution, GapEvaluation,
};
pub use matrix::SparseGameMatrix;
pub use pagerank::{
    pagerank_game_matrix, pagerank_solve, pagerank_via_game, stationarity_residual,
    PageRankSolution, STOCHASTIC_TOL,
};
