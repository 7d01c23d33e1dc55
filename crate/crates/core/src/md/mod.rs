//! Mirror-descent core: entropic prox maps, schedules, the MD1/MD2 steppers
//! and samplers.

mod dual;
mod lazy;
mod prox;
mod sampling;
mod schedule;

pub use dual::{DualState, Objective};
pub use lazy::LazyExpWeights;
pub use prox::{
    entropy_v, product_entropy, product_simplex_prox, smoothed_max, softmax_prox, Block,
    ProductSimplexSpec,
};
pub use sampling::{gumbel, gumbel_argmax_sample, sample_categorical};
pub use schedule::{adaptive_beta, nonadaptive_gamma, Schedule};
