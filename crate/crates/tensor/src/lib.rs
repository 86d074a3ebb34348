//! Dense row-major tensors with reverse-mode automatic differentiation.
//!
//! The engine records every operation into a dynamically built graph; calling
//! [`backward`] on a scalar loss sweeps the graph in reverse topological order
//! and accumulates gradients into every reachable tensor that requires them.
//! Element type is generic: `f32` for training, `f64` for verification via
//! [`grad_check`].

mod backward;
mod check;
mod error;
mod kernels;
mod ops;
mod scalar;
mod tensor;

pub use backward::backward;
pub use check::{grad_check, DEFAULT_GRAD_CHECK_STEP};
pub use error::{Result, TensorError};
pub use ops::{
    add, add_row, causal_attention, chunk_mean, concat_rows, conv1d, conv1d_out_len,
    embedding_lookup, layer_norm, masked_cross_entropy, matmul, matmul_transpose_b, mean_pool,
    mul, relu, reshape, row_weighted_sum, scale, softmax, sum, weighted_sum,
};
pub use scalar::Scalar;
pub use tensor::Tensor;
