//! Forward operations. Each op validates shapes, computes its result and
//! records itself on the output tensor so [`crate::backward`] can replay it.

use crate::error::{Result, TensorError};
use crate::kernels;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Recorded producing operation of a graph node. Holds the input handles
/// (which keeps the upstream graph alive) plus whatever the backward pass
/// needs beyond the node's own output.
pub(crate) enum Op<E: Scalar> {
    Matmul {
        a: Tensor<E>,
        b: Tensor<E>,
    },
    MatmulTransB {
        a: Tensor<E>,
        b: Tensor<E>,
    },
    Add {
        a: Tensor<E>,
        b: Tensor<E>,
    },
    AddRow {
        x: Tensor<E>,
        bias: Tensor<E>,
    },
    Mul {
        a: Tensor<E>,
        b: Tensor<E>,
    },
    Scale {
        x: Tensor<E>,
        c: E,
    },
    Relu {
        x: Tensor<E>,
    },
    Softmax {
        x: Tensor<E>,
        axis: usize,
    },
    Conv1d {
        x: Tensor<E>,
        kernel: Tensor<E>,
        bias: Tensor<E>,
        stride: usize,
        padding: usize,
    },
    MeanPool {
        x: Tensor<E>,
    },
    Embedding {
        table: Tensor<E>,
        ids: Vec<usize>,
    },
    CausalAttention {
        q: Tensor<E>,
        k: Tensor<E>,
        v: Tensor<E>,
        attn: Vec<E>,
    },
    MaskedCrossEntropy {
        logits: Tensor<E>,
        targets: Vec<usize>,
        mask: Vec<bool>,
        probs: Vec<E>,
    },
    LayerNorm {
        x: Tensor<E>,
        gain: Tensor<E>,
        normed: Vec<E>,
        inv_std: Vec<E>,
    },
    WeightedSum {
        xs: Vec<Tensor<E>>,
        w: Tensor<E>,
    },
    RowWeightedSum {
        xs: Vec<Tensor<E>>,
        w: Tensor<E>,
    },
    ChunkMean {
        x: Tensor<E>,
        chunk: usize,
    },
    ConcatRows {
        parts: Vec<Tensor<E>>,
    },
    Reshape {
        x: Tensor<E>,
    },
    Sum {
        x: Tensor<E>,
    },
}

impl<E: Scalar> Op<E> {
    pub(crate) fn inputs(&self) -> Vec<Tensor<E>> {
        match self {
            Op::Matmul { a, b } | Op::MatmulTransB { a, b } | Op::Add { a, b } | Op::Mul { a, b } => {
                vec![a.clone(), b.clone()]
            }
            Op::AddRow { x, bias } => vec![x.clone(), bias.clone()],
            Op::Scale { x, .. }
            | Op::Relu { x }
            | Op::Softmax { x, .. }
            | Op::MeanPool { x }
            | Op::ChunkMean { x, .. }
            | Op::Reshape { x }
            | Op::Sum { x } => vec![x.clone()],
            Op::Conv1d { x, kernel, bias, .. } => vec![x.clone(), kernel.clone(), bias.clone()],
            Op::Embedding { table, .. } => vec![table.clone()],
            Op::CausalAttention { q, k, v, .. } => vec![q.clone(), k.clone(), v.clone()],
            Op::MaskedCrossEntropy { logits, .. } => vec![logits.clone()],
            Op::LayerNorm { x, gain, .. } => vec![x.clone(), gain.clone()],
            Op::WeightedSum { xs, w } | Op::RowWeightedSum { xs, w } => {
                let mut all: Vec<_> = xs.clone();
                all.push(w.clone());
                all
            }
            Op::ConcatRows { parts } => parts.clone(),
        }
    }
}

fn dims2<E: Scalar>(t: &Tensor<E>, op: &'static str) -> Result<(usize, usize)> {
    match t.shape() {
        [r, c] => Ok((*r, *c)),
        s => Err(TensorError::InvalidShape {
            op,
            shape: s.to_vec(),
            msg: "expected a rank-2 tensor".into(),
        }),
    }
}

/// Standard matrix product `a[m×k] · b[k×n]`.
pub fn matmul<E: Scalar>(a: &Tensor<E>, b: &Tensor<E>) -> Result<Tensor<E>> {
    let (m, ka) = dims2(a, "matmul")?;
    let (kb, n) = dims2(b, "matmul")?;
    if ka != kb {
        return Err(TensorError::DimensionMismatch {
            op: "matmul",
            lhs: a.shape().to_vec(),
            rhs: b.shape().to_vec(),
        });
    }
    let mut out = vec![E::zero(); m * n];
    kernels::mm(&a.data(), &b.data(), &mut out, m, ka, n);
    Ok(Tensor::from_op(
        vec![m, n],
        out,
        Op::Matmul {
            a: a.clone(),
            b: b.clone(),
        },
    ))
}

/// `a[m×k] · b[n×k]ᵀ`; used for the tied output projection.
pub fn matmul_transpose_b<E: Scalar>(a: &Tensor<E>, b: &Tensor<E>) -> Result<Tensor<E>> {
    let (m, ka) = dims2(a, "matmul_transpose_b")?;
    let (n, kb) = dims2(b, "matmul_transpose_b")?;
    if ka != kb {
        return Err(TensorError::DimensionMismatch {
            op: "matmul_transpose_b",
            lhs: a.shape().to_vec(),
            rhs: b.shape().to_vec(),
        });
    }
    let mut out = vec![E::zero(); m * n];
    kernels::mm_bt(&a.data(), &b.data(), &mut out, m, ka, n);
    Ok(Tensor::from_op(
        vec![m, n],
        out,
        Op::MatmulTransB {
            a: a.clone(),
            b: b.clone(),
        },
    ))
}

/// Elementwise sum of two same-shape tensors.
pub fn add<E: Scalar>(a: &Tensor<E>, b: &Tensor<E>) -> Result<Tensor<E>> {
    if a.shape() != b.shape() {
        return Err(TensorError::DimensionMismatch {
            op: "add",
            lhs: a.shape().to_vec(),
            rhs: b.shape().to_vec(),
        });
    }
    let out: Vec<E> = a.data().iter().zip(b.data().iter()).map(|(&x, &y)| x + y).collect();
    Ok(Tensor::from_op(
        a.shape().to_vec(),
        out,
        Op::Add {
            a: a.clone(),
            b: b.clone(),
        },
    ))
}

/// Broadcast a length-n bias over every row of `x[t×n]`.
pub fn add_row<E: Scalar>(x: &Tensor<E>, bias: &Tensor<E>) -> Result<Tensor<E>> {
    let (t, n) = dims2(x, "add_row")?;
    if bias.shape() != [n] {
        return Err(TensorError::DimensionMismatch {
            op: "add_row",
            lhs: x.shape().to_vec(),
            rhs: bias.shape().to_vec(),
        });
    }
    let xd = x.data();
    let bd = bias.data();
    let mut out = vec![E::zero(); t * n];
    for r in 0..t {
        for c in 0..n {
            out[r * n + c] = xd[r * n + c] + bd[c];
        }
    }
    Ok(Tensor::from_op(
        vec![t, n],
        out,
        Op::AddRow {
            x: x.clone(),
            bias: bias.clone(),
        },
    ))
}

/// Elementwise product.
pub fn mul<E: Scalar>(a: &Tensor<E>, b: &Tensor<E>) -> Result<Tensor<E>> {
    if a.shape() != b.shape() {
        return Err(TensorError::DimensionMismatch {
            op: "mul",
            lhs: a.shape().to_vec(),
            rhs: b.shape().to_vec(),
        });
    }
    let out: Vec<E> = a.data().iter().zip(b.data().iter()).map(|(&x, &y)| x * y).collect();
    Ok(Tensor::from_op(
        a.shape().to_vec(),
        out,
        Op::Mul {
            a: a.clone(),
            b: b.clone(),
        },
    ))
}

/// Multiply every element by a constant.
pub fn scale<E: Scalar>(x: &Tensor<E>, c: E) -> Result<Tensor<E>> {
    let out: Vec<E> = x.data().iter().map(|&v| v * c).collect();
    Ok(Tensor::from_op(
        x.shape().to_vec(),
        out,
        Op::Scale { x: x.clone(), c },
    ))
}

/// Elementwise `max(0, x)`.
pub fn relu<E: Scalar>(x: &Tensor<E>) -> Result<Tensor<E>> {
    let out: Vec<E> = x
        .data()
        .iter()
        .map(|&v| if v > E::zero() { v } else { E::zero() })
        .collect();
    Ok(Tensor::from_op(x.shape().to_vec(), out, Op::Relu { x: x.clone() }))
}

/// Max-subtracted softmax along `axis` (0 on vectors; 0 = columns, 1 = rows
/// on matrices). Non-finite inputs are rejected.
pub fn softmax<E: Scalar>(x: &Tensor<E>, axis: usize) -> Result<Tensor<E>> {
    if axis >= x.rank().max(1) {
        return Err(TensorError::InvalidAxis {
            axis,
            shape: x.shape().to_vec(),
        });
    }
    if x.data().iter().any(|v| !v.is_finite()) {
        return Err(TensorError::NonFinite { op: "softmax" });
    }
    let mut out = x.to_vec();
    match *x.shape() {
        [_] => kernels::softmax_row(&mut out),
        [rows, cols] => {
            if axis == 1 {
                for r in 0..rows {
                    kernels::softmax_row(&mut out[r * cols..(r + 1) * cols]);
                }
            } else {
                let mut col = vec![E::zero(); rows];
                for c in 0..cols {
                    for r in 0..rows {
                        col[r] = out[r * cols + c];
                    }
                    kernels::softmax_row(&mut col);
                    for r in 0..rows {
                        out[r * cols + c] = col[r];
                    }
                }
            }
        }
        ref s => {
            return Err(TensorError::InvalidShape {
                op: "softmax",
                shape: s.to_vec(),
                msg: "expected rank 1 or 2".into(),
            })
        }
    }
    Ok(Tensor::from_op(
        x.shape().to_vec(),
        out,
        Op::Softmax { x: x.clone(), axis },
    ))
}

/// Output length of a 1-d cross-correlation.
pub fn conv1d_out_len(t: usize, k: usize, stride: usize, padding: usize) -> usize {
    (t + 2 * padding - k) / stride + 1
}

/// 1-d cross-correlation over time: `x[T×c_in]` with `kernel[c_out×c_in×k]`
/// and `bias[c_out]` gives `[T'×c_out]`, `T' = ⌊(T + 2p − k)/s⌋ + 1`.
pub fn conv1d<E: Scalar>(
    x: &Tensor<E>,
    kernel: &Tensor<E>,
    bias: &Tensor<E>,
    stride: usize,
    padding: usize,
) -> Result<Tensor<E>> {
    let (t, c_in) = dims2(x, "conv1d")?;
    let (c_out, kc_in, k) = match *kernel.shape() {
        [a, b, c] => (a, b, c),
        ref s => {
            return Err(TensorError::InvalidShape {
                op: "conv1d",
                shape: s.to_vec(),
                msg: "kernel must be rank 3 (c_out×c_in×k)".into(),
            })
        }
    };
    if kc_in != c_in {
        return Err(TensorError::DimensionMismatch {
            op: "conv1d",
            lhs: x.shape().to_vec(),
            rhs: kernel.shape().to_vec(),
        });
    }
    if bias.shape() != [c_out] {
        return Err(TensorError::DimensionMismatch {
            op: "conv1d",
            lhs: kernel.shape().to_vec(),
            rhs: bias.shape().to_vec(),
        });
    }
    if k == 0 || stride == 0 {
        return Err(TensorError::InvalidShape {
            op: "conv1d",
            shape: kernel.shape().to_vec(),
            msg: "kernel size and stride must be at least 1".into(),
        });
    }
    if t + 2 * padding < k {
        return Err(TensorError::DimensionMismatch {
            op: "conv1d",
            lhs: x.shape().to_vec(),
            rhs: kernel.shape().to_vec(),
        });
    }
    let t_out = conv1d_out_len(t, k, stride, padding);
    let xd = x.data();
    let kd = kernel.data();
    let bd = bias.data();
    let mut out = vec![E::zero(); t_out * c_out];
    for to in 0..t_out {
        for co in 0..c_out {
            let mut acc = bd[co];
            for j in 0..k {
                let ti = (to * stride + j) as isize - padding as isize;
                if ti < 0 || ti >= t as isize {
                    continue;
                }
                let xrow = &xd[ti as usize * c_in..(ti as usize + 1) * c_in];
                let krow = &kd[(co * c_in) * k + j..];
                // kernel laid out [c_out][c_in][k]: stride k between channels
                for (ci, &xv) in xrow.iter().enumerate() {
                    acc = acc + xv * krow[ci * k];
                }
            }
            out[to * c_out + co] = acc;
        }
    }
    Ok(Tensor::from_op(
        vec![t_out, c_out],
        out,
        Op::Conv1d {
            x: x.clone(),
            kernel: kernel.clone(),
            bias: bias.clone(),
            stride,
            padding,
        },
    ))
}

/// Arithmetic mean over the time axis: `[T×d] → [d]`.
pub fn mean_pool<E: Scalar>(x: &Tensor<E>) -> Result<Tensor<E>> {
    let (t, d) = dims2(x, "mean_pool")?;
    if t == 0 {
        return Err(TensorError::EmptyInput { op: "mean_pool" });
    }
    let xd = x.data();
    let inv = E::one() / E::from_usize(t);
    let mut out = vec![E::zero(); d];
    for r in 0..t {
        for c in 0..d {
            out[c] = out[c] + xd[r * d + c];
        }
    }
    for v in out.iter_mut() {
        *v = *v * inv;
    }
    Ok(Tensor::from_op(vec![d], out, Op::MeanPool { x: x.clone() }))
}

/// Row gather from an embedding table; backward scatter-adds.
pub fn embedding_lookup<E: Scalar>(table: &Tensor<E>, ids: &[usize]) -> Result<Tensor<E>> {
    let (v, d) = dims2(table, "embedding_lookup")?;
    for &id in ids {
        if id >= v {
            return Err(TensorError::IndexOutOfRange { id, len: v });
        }
    }
    let td = table.data();
    let mut out = Vec::with_capacity(ids.len() * d);
    for &id in ids {
        out.extend_from_slice(&td[id * d..(id + 1) * d]);
    }
    Ok(Tensor::from_op(
        vec![ids.len(), d],
        out,
        Op::Embedding {
            table: table.clone(),
            ids: ids.to_vec(),
        },
    ))
}

/// Single-head scaled dot-product attention with a causal mask: position `t`
/// sees positions `0..=t` only.
pub fn causal_attention<E: Scalar>(q: &Tensor<E>, k: &Tensor<E>, v: &Tensor<E>) -> Result<Tensor<E>> {
    let (t, d) = dims2(q, "causal_attention")?;
    if k.shape() != q.shape() || v.shape() != q.shape() {
        return Err(TensorError::DimensionMismatch {
            op: "causal_attention",
            lhs: q.shape().to_vec(),
            rhs: if k.shape() != q.shape() {
                k.shape().to_vec()
            } else {
                v.shape().to_vec()
            },
        });
    }
    let qd = q.data();
    let kd = k.data();
    let vd = v.data();
    let inv_sqrt = E::from_f64(1.0 / (d as f64).sqrt());
    // attn row i holds softmax over the first i+1 logits; the rest stays 0
    let mut attn = vec![E::zero(); t * t];
    for i in 0..t {
        let qrow = &qd[i * d..(i + 1) * d];
        let arow = &mut attn[i * t..i * t + i + 1];
        for (j, aj) in arow.iter_mut().enumerate() {
            let krow = &kd[j * d..(j + 1) * d];
            let mut dot = E::zero();
            for (&qv, &kv) in qrow.iter().zip(krow) {
                dot = dot + qv * kv;
            }
            *aj = dot * inv_sqrt;
        }
        kernels::softmax_row(arow);
    }
    let mut out = vec![E::zero(); t * d];
    for i in 0..t {
        let orow = &mut out[i * d..(i + 1) * d];
        for j in 0..=i {
            let a = attn[i * t + j];
            let vrow = &vd[j * d..(j + 1) * d];
            for (ov, &vv) in orow.iter_mut().zip(vrow) {
                *ov = *ov + a * vv;
            }
        }
    }
    Ok(Tensor::from_op(
        vec![t, d],
        out,
        Op::CausalAttention {
            q: q.clone(),
            k: k.clone(),
            v: v.clone(),
            attn,
        },
    ))
}

/// Mean of `−log softmax(logits)[target]` over positions where `mask` is
/// true. Unsupervised positions contribute nothing to the value or gradient.
pub fn masked_cross_entropy<E: Scalar>(
    logits: &Tensor<E>,
    targets: &[usize],
    mask: &[bool],
) -> Result<Tensor<E>> {
    let (t, v) = dims2(logits, "masked_cross_entropy")?;
    if targets.len() != t || mask.len() != t {
        return Err(TensorError::InvalidShape {
            op: "masked_cross_entropy",
            shape: logits.shape().to_vec(),
            msg: format!("{} targets and {} mask entries", targets.len(), mask.len()),
        });
    }
    let n_masked = mask.iter().filter(|&&m| m).count();
    if n_masked == 0 {
        return Err(TensorError::EmptySupervision);
    }
    let ld = logits.data();
    let mut probs = vec![E::zero(); t * v];
    let mut total = E::zero();
    for (r, (&target, &m)) in targets.iter().zip(mask).enumerate() {
        if !m {
            continue;
        }
        if target >= v {
            return Err(TensorError::IndexOutOfRange { id: target, len: v });
        }
        let row = &ld[r * v..(r + 1) * v];
        let prow = &mut probs[r * v..(r + 1) * v];
        prow.copy_from_slice(row);
        kernels::softmax_row(prow);
        let mut max = row[0];
        for &x in row {
            if x > max {
                max = x;
            }
        }
        let mut lse = E::zero();
        for &x in row {
            lse = lse + (x - max).exp();
        }
        total = total + (max + lse.ln() - row[target]);
    }
    let loss = total / E::from_usize(n_masked);
    Ok(Tensor::from_op(
        vec![1],
        vec![loss],
        Op::MaskedCrossEntropy {
            logits: logits.clone(),
            targets: targets.to_vec(),
            mask: mask.to_vec(),
            probs,
        },
    ))
}

const LAYER_NORM_EPS: f64 = 1e-5;

/// Per-row mean/variance normalization with an elementwise gain.
pub fn layer_norm<E: Scalar>(x: &Tensor<E>, gain: &Tensor<E>) -> Result<Tensor<E>> {
    let (t, d) = dims2(x, "layer_norm")?;
    if gain.shape() != [d] {
        return Err(TensorError::DimensionMismatch {
            op: "layer_norm",
            lhs: x.shape().to_vec(),
            rhs: gain.shape().to_vec(),
        });
    }
    let xd = x.data();
    let gd = gain.data();
    let inv_d = E::one() / E::from_usize(d);
    let eps = E::from_f64(LAYER_NORM_EPS);
    let mut normed = vec![E::zero(); t * d];
    let mut inv_std = vec![E::zero(); t];
    let mut out = vec![E::zero(); t * d];
    for r in 0..t {
        let row = &xd[r * d..(r + 1) * d];
        let mut mean = E::zero();
        for &v in row {
            mean = mean + v;
        }
        mean = mean * inv_d;
        let mut var = E::zero();
        for &v in row {
            let c = v - mean;
            var = var + c * c;
        }
        var = var * inv_d;
        let is = E::one() / (var + eps).sqrt();
        inv_std[r] = is;
        for c in 0..d {
            let nv = (row[c] - mean) * is;
            normed[r * d + c] = nv;
            out[r * d + c] = nv * gd[c];
        }
    }
    Ok(Tensor::from_op(
        vec![t, d],
        out,
        Op::LayerNorm {
            x: x.clone(),
            gain: gain.clone(),
            normed,
            inv_std,
        },
    ))
}

/// `y = Σᵢ wᵢ·xᵢ` over same-shape tensors with a length-N weight vector.
pub fn weighted_sum<E: Scalar>(xs: &[Tensor<E>], w: &Tensor<E>) -> Result<Tensor<E>> {
    if xs.is_empty() {
        return Err(TensorError::EmptyInput { op: "weighted_sum" });
    }
    if w.numel() != xs.len() {
        return Err(TensorError::DimensionMismatch {
            op: "weighted_sum",
            lhs: vec![xs.len()],
            rhs: w.shape().to_vec(),
        });
    }
    let shape = xs[0].shape().to_vec();
    for x in xs.iter().skip(1) {
        if x.shape() != shape {
            return Err(TensorError::DimensionMismatch {
                op: "weighted_sum",
                lhs: shape.clone(),
                rhs: x.shape().to_vec(),
            });
        }
    }
    let wd = w.data();
    let mut out = vec![E::zero(); xs[0].numel()];
    for (i, x) in xs.iter().enumerate() {
        let wi = wd[i];
        for (o, &v) in out.iter_mut().zip(x.data().iter()) {
            *o = *o + wi * v;
        }
    }
    Ok(Tensor::from_op(
        shape,
        out,
        Op::WeightedSum {
            xs: xs.to_vec(),
            w: w.clone(),
        },
    ))
}

/// Per-row mixture: `y[t] = Σᵢ w[t,i]·xᵢ[t]` with `w[T×N]`.
pub fn row_weighted_sum<E: Scalar>(xs: &[Tensor<E>], w: &Tensor<E>) -> Result<Tensor<E>> {
    if xs.is_empty() {
        return Err(TensorError::EmptyInput { op: "row_weighted_sum" });
    }
    let (t, d) = dims2(&xs[0], "row_weighted_sum")?;
    let (wt, n) = dims2(w, "row_weighted_sum")?;
    if wt != t || n != xs.len() {
        return Err(TensorError::DimensionMismatch {
            op: "row_weighted_sum",
            lhs: vec![t, xs.len()],
            rhs: w.shape().to_vec(),
        });
    }
    for x in xs.iter().skip(1) {
        if x.shape() != [t, d] {
            return Err(TensorError::DimensionMismatch {
                op: "row_weighted_sum",
                lhs: vec![t, d],
                rhs: x.shape().to_vec(),
            });
        }
    }
    let wd = w.data();
    let mut out = vec![E::zero(); t * d];
    for (i, x) in xs.iter().enumerate() {
        let xd = x.data();
        for r in 0..t {
            let wi = wd[r * n + i];
            let orow = &mut out[r * d..(r + 1) * d];
            let xrow = &xd[r * d..(r + 1) * d];
            for (o, &v) in orow.iter_mut().zip(xrow) {
                *o = *o + wi * v;
            }
        }
    }
    Ok(Tensor::from_op(
        vec![t, d],
        out,
        Op::RowWeightedSum {
            xs: xs.to_vec(),
            w: w.clone(),
        },
    ))
}

/// Mean over consecutive row chunks of the given size; the last chunk may be
/// shorter. `[T×d] → [⌈T/chunk⌉×d]`.
pub fn chunk_mean<E: Scalar>(x: &Tensor<E>, chunk: usize) -> Result<Tensor<E>> {
    let (t, d) = dims2(x, "chunk_mean")?;
    if t == 0 || chunk == 0 {
        return Err(TensorError::EmptyInput { op: "chunk_mean" });
    }
    let t_out = t.div_ceil(chunk);
    let xd = x.data();
    let mut out = vec![E::zero(); t_out * d];
    for to in 0..t_out {
        let lo = to * chunk;
        let hi = (lo + chunk).min(t);
        let inv = E::one() / E::from_usize(hi - lo);
        for r in lo..hi {
            for c in 0..d {
                out[to * d + c] = out[to * d + c] + xd[r * d + c];
            }
        }
        for c in 0..d {
            out[to * d + c] = out[to * d + c] * inv;
        }
    }
    Ok(Tensor::from_op(
        vec![t_out, d],
        out,
        Op::ChunkMean { x: x.clone(), chunk },
    ))
}

/// Stack rank-2 parts with equal column counts on top of each other.
pub fn concat_rows<E: Scalar>(parts: &[Tensor<E>]) -> Result<Tensor<E>> {
    if parts.is_empty() {
        return Err(TensorError::EmptyInput { op: "concat_rows" });
    }
    let (_, d) = dims2(&parts[0], "concat_rows")?;
    let mut rows = 0;
    for p in parts {
        let (r, pd) = dims2(p, "concat_rows")?;
        if pd != d {
            return Err(TensorError::DimensionMismatch {
                op: "concat_rows",
                lhs: parts[0].shape().to_vec(),
                rhs: p.shape().to_vec(),
            });
        }
        rows += r;
    }
    let mut out = Vec::with_capacity(rows * d);
    for p in parts {
        out.extend_from_slice(&p.data());
    }
    Ok(Tensor::from_op(
        vec![rows, d],
        out,
        Op::ConcatRows { parts: parts.to_vec() },
    ))
}

/// Same data, new shape; element count must be preserved.
pub fn reshape<E: Scalar>(x: &Tensor<E>, shape: &[usize]) -> Result<Tensor<E>> {
    let numel: usize = shape.iter().product();
    if numel != x.numel() {
        return Err(TensorError::InvalidShape {
            op: "reshape",
            shape: shape.to_vec(),
            msg: format!("cannot hold {} elements", x.numel()),
        });
    }
    Ok(Tensor::from_op(
        shape.to_vec(),
        x.to_vec(),
        Op::Reshape { x: x.clone() },
    ))
}

/// Sum of all elements, as a scalar tensor.
pub fn sum<E: Scalar>(x: &Tensor<E>) -> Result<Tensor<E>> {
    let mut acc = E::zero();
    for &v in x.data().iter() {
        acc = acc + v;
    }
    Ok(Tensor::from_op(vec![1], vec![acc], Op::Sum { x: x.clone() }))
}
