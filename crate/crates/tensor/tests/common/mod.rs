//! Shared helpers for the engine tests: a tiny deterministic RNG wrapper and
//! reference (oracle) implementations kept independent of the op kernels.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct TestRng(pub ChaCha8Rng);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.0.next_u32() as f64 + 0.5) / (u32::MAX as f64 + 1.0);
        lo + (hi - lo) * u
    }

    pub fn vec(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }

    pub fn index(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }
}

/// Triple-loop matrix product, the matmul oracle.
pub fn naive_matmul(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let mut s = 0.0;
            for p in 0..k {
                s += a[i * k + p] * b[p * n + j];
            }
            c[i * n + j] = s;
        }
    }
    c
}

/// Conv oracle: materialize the zero-padded input, then correlate.
pub fn naive_conv1d(
    x: &[f64],
    t: usize,
    c_in: usize,
    kernel: &[f64],
    c_out: usize,
    k: usize,
    bias: &[f64],
    stride: usize,
    padding: usize,
) -> Vec<f64> {
    let tp = t + 2 * padding;
    let mut padded = vec![0.0; tp * c_in];
    for r in 0..t {
        for c in 0..c_in {
            padded[(r + padding) * c_in + c] = x[r * c_in + c];
        }
    }
    let t_out = (tp - k) / stride + 1;
    let mut out = vec![0.0; t_out * c_out];
    for to in 0..t_out {
        for co in 0..c_out {
            let mut acc = bias[co];
            for ci in 0..c_in {
                for j in 0..k {
                    acc += padded[(to * stride + j) * c_in + ci] * kernel[(co * c_in + ci) * k + j];
                }
            }
            out[to * c_out + co] = acc;
        }
    }
    out
}

/// Per-position attention oracle: explicit softmax over the visible prefix.
pub fn naive_causal_attention(q: &[f64], k: &[f64], v: &[f64], t: usize, d: usize) -> Vec<f64> {
    let mut out = vec![0.0; t * d];
    let scale = 1.0 / (d as f64).sqrt();
    for i in 0..t {
        let mut logits = Vec::with_capacity(i + 1);
        for j in 0..=i {
            let mut dot = 0.0;
            for c in 0..d {
                dot += q[i * d + c] * k[j * d + c];
            }
            logits.push(dot * scale);
        }
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
        let denom: f64 = exps.iter().sum();
        for (j, &e) in exps.iter().enumerate() {
            let w = e / denom;
            for c in 0..d {
                out[i * d + c] += w * v[j * d + c];
            }
        }
    }
    out
}

pub fn assert_close(actual: &[f64], expected: &[f64], tol: f64, what: &str) {
    assert_eq!(actual.len(), expected.len(), "{what}: length mismatch");
    for (i, (&a, &e)) in actual.iter().zip(expected).enumerate() {
        assert!(
            (a - e).abs() <= tol,
            "{what}: element {i} differs: {a} vs {e} (tol {tol})"
        );
    }
}
