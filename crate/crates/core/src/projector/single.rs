//! Plain single-adapter pipeline: the same conv front-end feeding one
//! adapter, with no router. This is the monolithic baseline the mixture is
//! compared against; with matched parameters it is output-equivalent to the
//! mixture run with one expert.

use mosa_tensor::{relu, Scalar, Tensor};

use crate::config::ProjectorConfig;
use crate::error::Result;
use crate::nn::{Conv1dLayer, Mlp};
use crate::rng::SeededRng;

use super::{Projector, CONV_KERNEL, CONV_PADDING, CONV_STRIDE};

pub struct SingleAdapterProjector<E: Scalar> {
    pub conv1: Conv1dLayer<E>,
    pub conv2: Conv1dLayer<E>,
    pub adapter: Mlp<E>,
}

impl<E: Scalar> SingleAdapterProjector<E> {
    pub fn new(cfg: &ProjectorConfig, rng: &mut SeededRng) -> Self {
        SingleAdapterProjector {
            conv1: Conv1dLayer::new(
                rng,
                cfg.d_enc,
                cfg.d_llm,
                CONV_KERNEL,
                CONV_STRIDE,
                CONV_PADDING,
                true,
            ),
            conv2: Conv1dLayer::new(
                rng,
                cfg.d_llm,
                cfg.d_llm,
                CONV_KERNEL,
                CONV_STRIDE,
                CONV_PADDING,
                true,
            ),
            adapter: Mlp::new(rng, cfg.d_llm, cfg.d_hidden, cfg.d_llm, true),
        }
    }
}

impl<E: Scalar> Projector<E> for SingleAdapterProjector<E> {
    fn kind(&self) -> &'static str {
        "single"
    }

    fn num_experts(&self) -> usize {
        1
    }

    fn forward(&self, h_a: &Tensor<E>) -> Result<(Tensor<E>, Vec<E>)> {
        let h = relu(&self.conv1.forward(h_a)?)?;
        let h_conv = relu(&self.conv2.forward(&h)?)?;
        Ok((self.adapter.forward(&h_conv)?, vec![E::one()]))
    }

    fn parameters(&self) -> Vec<(String, Tensor<E>)> {
        let mut out = Vec::new();
        self.conv1.params("conv1", &mut out);
        self.conv2.params("conv2", &mut out);
        self.adapter.params("adapter", &mut out);
        out
    }
}
