//! Randomized mirror descent on the probability simplex.
//!
//! Two steppers share one entropic prox: MD1 plays the softmax of the
//! accumulated (stochastic) subgradients, MD2 plays a vertex sampled from the
//! same distribution. On top of them sit an adversarial bandit, expert
//! weighting, a sublinear solver for sparse matrix games and a PageRank
//! solver, plus the instrumentation needed to check regret bounds.

pub mod analysis;
pub mod apps;
pub mod cli;
pub mod env;
mod error;
pub mod md;
pub mod simplex;

pub use error::{Error, Result};
