//! Deterministic dense numerical primitives.
//!
//! Vectors are plain `f64` slices; [`Matrix`] is a row-major dense matrix. All
//! reductions sum sequentially in index order so that results are bitwise
//! reproducible.

mod activation;
mod adam;
mod matrix;
mod rng;

pub use activation::{leaky_relu, leaky_relu_grad, softmax_t, DEFAULT_LEAKY_SLOPE};
pub use adam::{AdamConfig, AdamState};
pub use matrix::{axpy, dot, l2_distance, matmul, matmul_nt, matmul_tn, norm_sq, Matrix};
pub use rng::{mix_seed, Rng};
