//! Linear and convolution layers shared by the projector and the frozen
//! stand-ins. Weights draw from uniform(±√(1/fan_in)); biases start at zero.

use mosa_tensor::{add_row, conv1d, matmul, relu, Scalar, Tensor};

use crate::error::Result;
use crate::rng::SeededRng;

pub struct Linear<E: Scalar> {
    /// Row-major `[d_in × d_out]`; forward computes `x·W + b`.
    pub weight: Tensor<E>,
    pub bias: Tensor<E>,
}

fn draw<E: Scalar>(rng: &mut SeededRng, n: usize, bound: f64) -> Vec<E> {
    (0..n).map(|_| E::from_f64(rng.uniform(-bound, bound))).collect()
}

fn leaf<E: Scalar>(shape: &[usize], data: Vec<E>, trainable: bool) -> Tensor<E> {
    if trainable {
        Tensor::param(shape, data).expect("layer shapes are consistent")
    } else {
        Tensor::from_vec(shape, data).expect("layer shapes are consistent")
    }
}

impl<E: Scalar> Linear<E> {
    pub fn new(rng: &mut SeededRng, d_in: usize, d_out: usize, trainable: bool) -> Self {
        let bound = (1.0 / d_in as f64).sqrt();
        Linear {
            weight: leaf(&[d_in, d_out], draw(rng, d_in * d_out, bound), trainable),
            bias: leaf(&[d_out], vec![E::zero(); d_out], trainable),
        }
    }

    /// All-zero layer; the router head starts here so fresh models gate
    /// every expert uniformly.
    pub fn zeroed(d_in: usize, d_out: usize, trainable: bool) -> Self {
        Linear {
            weight: leaf(&[d_in, d_out], vec![E::zero(); d_in * d_out], trainable),
            bias: leaf(&[d_out], vec![E::zero(); d_out], trainable),
        }
    }

    pub fn forward(&self, x: &Tensor<E>) -> Result<Tensor<E>> {
        Ok(add_row(&matmul(x, &self.weight)?, &self.bias)?)
    }

    pub fn params(&self, prefix: &str, out: &mut Vec<(String, Tensor<E>)>) {
        out.push((format!("{prefix}.weight"), self.weight.clone()));
        out.push((format!("{prefix}.bias"), self.bias.clone()));
    }
}

pub struct Conv1dLayer<E: Scalar> {
    /// `[c_out × c_in × k]`
    pub kernel: Tensor<E>,
    pub bias: Tensor<E>,
    pub stride: usize,
    pub padding: usize,
}

impl<E: Scalar> Conv1dLayer<E> {
    pub fn new(
        rng: &mut SeededRng,
        c_in: usize,
        c_out: usize,
        k: usize,
        stride: usize,
        padding: usize,
        trainable: bool,
    ) -> Self {
        let bound = (1.0 / (c_in * k) as f64).sqrt();
        Conv1dLayer {
            kernel: leaf(&[c_out, c_in, k], draw(rng, c_out * c_in * k, bound), trainable),
            bias: leaf(&[c_out], vec![E::zero(); c_out], trainable),
            stride,
            padding,
        }
    }

    pub fn forward(&self, x: &Tensor<E>) -> Result<Tensor<E>> {
        Ok(conv1d(x, &self.kernel, &self.bias, self.stride, self.padding)?)
    }

    pub fn params(&self, prefix: &str, out: &mut Vec<(String, Tensor<E>)>) {
        out.push((format!("{prefix}.kernel"), self.kernel.clone()));
        out.push((format!("{prefix}.bias"), self.bias.clone()));
    }
}

/// Two linear layers with a ReLU between.
pub struct Mlp<E: Scalar> {
    pub fc1: Linear<E>,
    pub fc2: Linear<E>,
}

impl<E: Scalar> Mlp<E> {
    pub fn new(rng: &mut SeededRng, d_in: usize, d_hidden: usize, d_out: usize, trainable: bool) -> Self {
        Mlp {
            fc1: Linear::new(rng, d_in, d_hidden, trainable),
            fc2: Linear::new(rng, d_hidden, d_out, trainable),
        }
    }

    pub fn forward(&self, x: &Tensor<E>) -> Result<Tensor<E>> {
        self.fc2.forward(&relu(&self.fc1.forward(x)?)?)
    }

    pub fn params(&self, prefix: &str, out: &mut Vec<(String, Tensor<E>)>) {
        self.fc1.params(&format!("{prefix}.fc1"), out);
        self.fc2.params(&format!("{prefix}.fc2"), out);
    }
}
