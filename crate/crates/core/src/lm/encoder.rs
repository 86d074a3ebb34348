//! Frozen framewise feature encoder.

use mosa_tensor::{Scalar, Tensor, TensorError};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::nn::Mlp;
use crate::rng::SeededRng;

/// Framewise two-layer network whose parameters are drawn once from a seed
/// and never updated; the stand-in for a large pretrained speech encoder.
pub struct FrozenEncoder<E: Scalar> {
    net: Mlp<E>,
    pub d_feat: usize,
    pub d_enc: usize,
}

impl<E: Scalar> FrozenEncoder<E> {
    pub fn new(rng: &mut SeededRng, d_feat: usize, d_enc: usize) -> Self {
        FrozenEncoder {
            net: Mlp::new(rng, d_feat, d_enc, d_enc, false),
            d_feat,
            d_enc,
        }
    }

    pub fn encode(&self, features: &Tensor<E>) -> Result<Tensor<E>> {
        if features.shape().first() == Some(&0) {
            return Err(TensorError::EmptyInput { op: "encode" }.into());
        }
        self.net.forward(features)
    }

    pub fn parameters(&self) -> Vec<(String, Tensor<E>)> {
        let mut out = Vec::new();
        self.net.params("encoder", &mut out);
        out
    }

    pub fn checksum(&self) -> [u8; 32] {
        checksum_params(&self.parameters())
    }
}

pub(crate) fn checksum_params<E: Scalar>(params: &[(String, Tensor<E>)]) -> [u8; 32] {
    let mut h = Sha256::new();
    for (name, t) in params {
        h.update(name.as_bytes());
        for v in t.data().iter() {
            h.update(v.to_f64().to_le_bytes());
        }
    }
    h.finalize().into()
}
