//! Projector strategies: interchangeable modules that map frozen encoder
//! output sequences into the decoder's embedding space. Each strategy lives
//! behind [`Projector`] and is selected by name at runtime, so the gated
//! mixture and the plain single-adapter baseline run through the exact same
//! training and evaluation paths.

mod mosa;
mod single;

pub use mosa::MosaProjector;
pub use single::SingleAdapterProjector;

use mosa_tensor::{Scalar, Tensor};

use crate::config::ProjectorConfig;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Conv front-end geometry: two stride-2 layers, kernel 3, padding 1, so the
/// frame rate drops 4× (`T → ⌈T/4⌉`) for every input length.
pub const CONV_KERNEL: usize = 3;
pub const CONV_STRIDE: usize = 2;
pub const CONV_PADDING: usize = 1;
pub const DOWNSAMPLE_FACTOR: usize = 4;

/// Names accepted by [`build`], in registration order.
pub const KINDS: &[&str] = &["mosa", "single"];

pub fn is_known_kind(kind: &str) -> bool {
    KINDS.contains(&kind)
}

/// Common surface of every projector strategy. `forward` returns the aligned
/// sequence plus the per-utterance expert weights (a length-N simplex
/// vector, kept for utilization logging and analysis).
pub trait Projector<E: Scalar> {
    fn kind(&self) -> &'static str;

    fn num_experts(&self) -> usize;

    fn forward(&self, h_a: &Tensor<E>) -> Result<(Tensor<E>, Vec<E>)>;

    /// Trainable tensors, deterministically ordered and named.
    fn parameters(&self) -> Vec<(String, Tensor<E>)>;
}

/// Instantiate a registered strategy by the name in `cfg.kind`.
pub fn build<E: Scalar>(cfg: &ProjectorConfig, seed: u64) -> Result<Box<dyn Projector<E>>> {
    cfg.validate()?;
    let mut rng = SeededRng::new(seed);
    match cfg.kind.as_str() {
        "mosa" => Ok(Box::new(MosaProjector::new(cfg, &mut rng))),
        "single" => Ok(Box::new(SingleAdapterProjector::new(cfg, &mut rng))),
        other => Err(Error::config(format!("unknown projector kind '{other}'"))),
    }
}

/// Output length of the two-layer conv front-end.
pub fn downsampled_len(t: usize) -> usize {
    let once = mosa_tensor::conv1d_out_len(t, CONV_KERNEL, CONV_STRIDE, CONV_PADDING);
    mosa_tensor::conv1d_out_len(once, CONV_KERNEL, CONV_STRIDE, CONV_PADDING)
}
