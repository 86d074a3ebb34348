//! Softmax-gated mixture of simple adapters.
//!
//! The encoder sequence takes two paths: the conv front-end downsamples it
//! 4× while lifting the width to the decoder dimension, and the router turns
//! the (pooled) sequence into softmax weights over the adapter experts. The
//! output is the weighted sum of the expert outputs.

use mosa_tensor::{
    chunk_mean, mean_pool, relu, reshape, row_weighted_sum, softmax, weighted_sum, Scalar, Tensor,
};

use crate::config::ProjectorConfig;
use crate::error::Result;
use crate::nn::{Conv1dLayer, Linear, Mlp};
use crate::rng::SeededRng;

use super::{Projector, CONV_KERNEL, CONV_PADDING, CONV_STRIDE, DOWNSAMPLE_FACTOR};

pub struct MosaProjector<E: Scalar> {
    pub conv1: Conv1dLayer<E>,
    pub conv2: Conv1dLayer<E>,
    /// Linear layers per the configured router widths, ReLU between each
    /// consecutive pair; the final layer starts at zero so a fresh model
    /// gates every expert uniformly.
    pub router: Vec<Linear<E>>,
    pub experts: Vec<Mlp<E>>,
    pub per_frame_routing: bool,
}

impl<E: Scalar> MosaProjector<E> {
    pub fn new(cfg: &ProjectorConfig, rng: &mut SeededRng) -> Self {
        let conv1 = Conv1dLayer::new(
            rng,
            cfg.d_enc,
            cfg.d_llm,
            CONV_KERNEL,
            CONV_STRIDE,
            CONV_PADDING,
            true,
        );
        let conv2 = Conv1dLayer::new(
            rng,
            cfg.d_llm,
            cfg.d_llm,
            CONV_KERNEL,
            CONV_STRIDE,
            CONV_PADDING,
            true,
        );
        let dims = cfg.router_dims();
        let mut router = Vec::with_capacity(dims.len() - 1);
        for i in 0..dims.len() - 1 {
            let last = i + 2 == dims.len();
            router.push(if last {
                Linear::zeroed(dims[i], dims[i + 1], true)
            } else {
                Linear::new(rng, dims[i], dims[i + 1], true)
            });
        }
        let experts = (0..cfg.n_experts)
            .map(|_| Mlp::new(rng, cfg.d_llm, cfg.d_hidden, cfg.d_llm, true))
            .collect();
        MosaProjector {
            conv1,
            conv2,
            router,
            experts,
            per_frame_routing: cfg.per_frame_routing,
        }
    }

    /// Conv front-end: conv → ReLU → conv → ReLU, `T → ⌈T/4⌉` rows.
    pub fn downsample(&self, h_a: &Tensor<E>) -> Result<Tensor<E>> {
        let h = relu(&self.conv1.forward(h_a)?)?;
        Ok(relu(&self.conv2.forward(&h)?)?)
    }

    fn router_logits(&self, x: &Tensor<E>) -> Result<Tensor<E>> {
        let mut h = x.clone();
        for (i, layer) in self.router.iter().enumerate() {
            h = layer.forward(&h)?;
            if i + 1 < self.router.len() {
                h = relu(&h)?;
            }
        }
        Ok(h)
    }

    /// Expert weights from the raw encoder sequence. Per-utterance mode
    /// pools over time first; per-frame mode pools stride-4 windows so the
    /// weight rows align with the conv output frames. Rows always lie on the
    /// simplex.
    pub fn route(&self, h_a: &Tensor<E>) -> Result<Tensor<E>> {
        let pooled = if self.per_frame_routing {
            chunk_mean(h_a, DOWNSAMPLE_FACTOR)?
        } else {
            let p = mean_pool(h_a)?;
            let d = p.numel();
            reshape(&p, &[1, d])?
        };
        Ok(softmax(&self.router_logits(&pooled)?, 1)?)
    }

    /// Weighted sum of the expert outputs; `w` is `[1×N]` (shared by every
    /// frame) or `[T'×N]` (one row per frame).
    pub fn mix(&self, h_conv: &Tensor<E>, w: &Tensor<E>) -> Result<Tensor<E>> {
        let outs: Vec<Tensor<E>> = self
            .experts
            .iter()
            .map(|e| e.forward(h_conv))
            .collect::<Result<_>>()?;
        let n = self.experts.len();
        if w.shape() == [1, n] {
            Ok(weighted_sum(&outs, &reshape(w, &[n])?)?)
        } else {
            Ok(row_weighted_sum(&outs, w)?)
        }
    }

    /// Mean expert weights over the routing rows, for logging.
    fn weight_snapshot(&self, w: &Tensor<E>) -> Vec<E> {
        let n = self.experts.len();
        let rows = w.shape()[0];
        let wd = w.data();
        let inv = E::from_usize(rows).recip();
        (0..n)
            .map(|i| {
                let mut acc = E::zero();
                for r in 0..rows {
                    acc = acc + wd[r * n + i];
                }
                acc * inv
            })
            .collect()
    }
}

impl<E: Scalar> Projector<E> for MosaProjector<E> {
    fn kind(&self) -> &'static str {
        "mosa"
    }

    fn num_experts(&self) -> usize {
        self.experts.len()
    }

    fn forward(&self, h_a: &Tensor<E>) -> Result<(Tensor<E>, Vec<E>)> {
        let w = self.route(h_a)?;
        let h_conv = self.downsample(h_a)?;
        let h_adapt = self.mix(&h_conv, &w)?;
        let snapshot = self.weight_snapshot(&w);
        Ok((h_adapt, snapshot))
    }

    fn parameters(&self) -> Vec<(String, Tensor<E>)> {
        let mut out = Vec::new();
        self.conv1.params("conv1", &mut out);
        self.conv2.params("conv2", &mut out);
        for (i, layer) in self.router.iter().enumerate() {
            layer.params(&format!("router.{i}"), &mut out);
        }
        for (i, e) in self.experts.iter().enumerate() {
            e.params(&format!("experts.{i}"), &mut out);
        }
        out
    }
}
