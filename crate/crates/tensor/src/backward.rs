//! Reverse sweep over the recorded graph.

use std::collections::{HashMap, HashSet};

use crate::error::{Result, TensorError};
use crate::kernels;
use crate::ops::Op;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Backpropagate from a scalar loss. Gradients are accumulated (`+=`) into
/// every reachable tensor with `requires_grad`; calling twice without zeroing
/// doubles them. Each call uses its own sweep buffers, so repeated calls see
/// the original upstream seed of ones, not previously accumulated values.
pub fn backward<E: Scalar>(loss: &Tensor<E>) -> Result<()> {
    if loss.numel() != 1 {
        return Err(TensorError::NotScalar {
            op: "backward",
            shape: loss.shape().to_vec(),
        });
    }
    if !loss.requires_grad() {
        return Ok(());
    }

    let order = topo_order(loss);
    let mut grads: HashMap<u64, Vec<E>> = HashMap::new();
    grads.insert(loss.id(), vec![E::one()]);

    for node in order.iter().rev() {
        let Some(g) = grads.get(&node.id()).cloned() else {
            continue;
        };
        if let Some(op) = node.op() {
            propagate(node, op, &g, &mut grads);
        }
    }

    for node in &order {
        if let Some(g) = grads.get(&node.id()) {
            node.accumulate_grad(g);
        }
    }
    Ok(())
}

/// Post-order over the subgraph that requires gradients; inputs precede uses.
fn topo_order<E: Scalar>(root: &Tensor<E>) -> Vec<Tensor<E>> {
    let mut order = Vec::new();
    let mut visited: HashSet<u64> = HashSet::new();
    let mut stack: Vec<(Tensor<E>, bool)> = vec![(root.clone(), false)];
    while let Some((node, expanded)) = stack.pop() {
        if expanded {
            order.push(node);
            continue;
        }
        if !visited.insert(node.id()) {
            continue;
        }
        stack.push((node.clone(), true));
        if let Some(op) = node.op() {
            for input in op.inputs() {
                if input.requires_grad() && !visited.contains(&input.id()) {
                    stack.push((input, false));
                }
            }
        }
    }
    order
}

fn acc<'m, E: Scalar>(grads: &'m mut HashMap<u64, Vec<E>>, t: &Tensor<E>) -> &'m mut Vec<E> {
    grads
        .entry(t.id())
        .or_insert_with(|| vec![E::zero(); t.numel()])
}

fn add_into<E: Scalar>(dst: &mut [E], src: &[E]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = *d + s;
    }
}

fn propagate<E: Scalar>(node: &Tensor<E>, op: &Op<E>, g: &[E], grads: &mut HashMap<u64, Vec<E>>) {
    match op {
        Op::Matmul { a, b } => {
            let (m, k) = (a.shape()[0], a.shape()[1]);
            let n = b.shape()[1];
            if a.requires_grad() {
                kernels::mm_bt(g, &b.data(), acc(grads, a), m, n, k);
            }
            if b.requires_grad() {
                kernels::mm_at(&a.data(), g, acc(grads, b), k, m, n);
            }
        }
        Op::MatmulTransB { a, b } => {
            // y[m×n] = a[m×k]·b[n×k]ᵀ
            let (m, k) = (a.shape()[0], a.shape()[1]);
            let n = b.shape()[0];
            if a.requires_grad() {
                kernels::mm(g, &b.data(), acc(grads, a), m, n, k);
            }
            if b.requires_grad() {
                kernels::mm_at(g, &a.data(), acc(grads, b), n, m, k);
            }
        }
        Op::Add { a, b } => {
            if a.requires_grad() {
                add_into(acc(grads, a), g);
            }
            if b.requires_grad() {
                add_into(acc(grads, b), g);
            }
        }
        Op::AddRow { x, bias } => {
            let (t, n) = (x.shape()[0], x.shape()[1]);
            if x.requires_grad() {
                add_into(acc(grads, x), g);
            }
            if bias.requires_grad() {
                let gb = acc(grads, bias);
                for r in 0..t {
                    for c in 0..n {
                        gb[c] = gb[c] + g[r * n + c];
                    }
                }
            }
        }
        Op::Mul { a, b } => {
            if a.requires_grad() {
                let bd = b.data();
                let ga = acc(grads, a);
                for i in 0..g.len() {
                    ga[i] = ga[i] + g[i] * bd[i];
                }
            }
            if b.requires_grad() {
                let ad = a.data();
                let gb = acc(grads, b);
                for i in 0..g.len() {
                    gb[i] = gb[i] + g[i] * ad[i];
                }
            }
        }
        Op::Scale { x, c } => {
            if x.requires_grad() {
                let gx = acc(grads, x);
                for i in 0..g.len() {
                    gx[i] = gx[i] + g[i] * *c;
                }
            }
        }
        Op::Relu { x } => {
            if x.requires_grad() {
                let xd = x.data();
                let gx = acc(grads, x);
                for i in 0..g.len() {
                    if xd[i] > E::zero() {
                        gx[i] = gx[i] + g[i];
                    }
                }
            }
        }
        Op::Softmax { x, axis } => {
            if !x.requires_grad() {
                return;
            }
            let y = node.data();
            match *x.shape() {
                [_] => kernels::softmax_row_backward(&y, g, acc(grads, x)),
                [rows, cols] => {
                    if *axis == 1 {
                        let gx = acc(grads, x);
                        for r in 0..rows {
                            let lo = r * cols;
                            let hi = lo + cols;
                            kernels::softmax_row_backward(&y[lo..hi], &g[lo..hi], &mut gx[lo..hi]);
                        }
                    } else {
                        let mut ycol = vec![E::zero(); rows];
                        let mut gcol = vec![E::zero(); rows];
                        let mut dcol = vec![E::zero(); rows];
                        let gx = acc(grads, x);
                        for c in 0..cols {
                            for r in 0..rows {
                                ycol[r] = y[r * cols + c];
                                gcol[r] = g[r * cols + c];
                                dcol[r] = E::zero();
                            }
                            kernels::softmax_row_backward(&ycol, &gcol, &mut dcol);
                            for r in 0..rows {
                                gx[r * cols + c] = gx[r * cols + c] + dcol[r];
                            }
                        }
                    }
                }
                _ => unreachable!("softmax forward rejects rank > 2"),
            }
        }
        Op::Conv1d {
            x,
            kernel,
            bias,
            stride,
            padding,
        } => {
            let (t, c_in) = (x.shape()[0], x.shape()[1]);
            let (c_out, k) = (kernel.shape()[0], kernel.shape()[2]);
            let t_out = node.shape()[0];
            let xd = x.data();
            let kd = kernel.data();
            if bias.requires_grad() {
                let gb = acc(grads, bias);
                for to in 0..t_out {
                    for co in 0..c_out {
                        gb[co] = gb[co] + g[to * c_out + co];
                    }
                }
            }
            if kernel.requires_grad() {
                let gk = acc(grads, kernel);
                for to in 0..t_out {
                    for co in 0..c_out {
                        let gv = g[to * c_out + co];
                        for j in 0..k {
                            let ti = (to * stride + j) as isize - *padding as isize;
                            if ti < 0 || ti >= t as isize {
                                continue;
                            }
                            let xrow = &xd[ti as usize * c_in..(ti as usize + 1) * c_in];
                            for (ci, &xv) in xrow.iter().enumerate() {
                                let idx = (co * c_in + ci) * k + j;
                                gk[idx] = gk[idx] + gv * xv;
                            }
                        }
                    }
                }
            }
            if x.requires_grad() {
                let gx = acc(grads, x);
                for to in 0..t_out {
                    for co in 0..c_out {
                        let gv = g[to * c_out + co];
                        for j in 0..k {
                            let ti = (to * stride + j) as isize - *padding as isize;
                            if ti < 0 || ti >= t as isize {
                                continue;
                            }
                            let base = ti as usize * c_in;
                            for ci in 0..c_in {
                                gx[base + ci] = gx[base + ci] + gv * kd[(co * c_in + ci) * k + j];
                            }
                        }
                    }
                }
            }
        }
        Op::MeanPool { x } => {
            if x.requires_grad() {
                let (t, d) = (x.shape()[0], x.shape()[1]);
                let inv = E::one() / E::from_usize(t);
                let gx = acc(grads, x);
                for r in 0..t {
                    for c in 0..d {
                        gx[r * d + c] = gx[r * d + c] + g[c] * inv;
                    }
                }
            }
        }
        Op::Embedding { table, ids } => {
            if table.requires_grad() {
                let d = table.shape()[1];
                let gt = acc(grads, table);
                for (r, &id) in ids.iter().enumerate() {
                    for c in 0..d {
                        gt[id * d + c] = gt[id * d + c] + g[r * d + c];
                    }
                }
            }
        }
        Op::CausalAttention { q, k, v, attn } => {
            let (t, d) = (q.shape()[0], q.shape()[1]);
            let inv_sqrt = E::from_f64(1.0 / (d as f64).sqrt());
            let vd = v.data();
            if v.requires_grad() {
                // dv = attnᵀ · g
                kernels::mm_at(attn, g, acc(grads, v), t, t, d);
            }
            if q.requires_grad() || k.requires_grad() {
                // d_attn = g · vᵀ, then softmax backward row-wise, masked
                let mut d_attn = vec![E::zero(); t * t];
                kernels::mm_bt(g, &vd, &mut d_attn, t, d, t);
                let mut d_scores = vec![E::zero(); t * t];
                for i in 0..t {
                    let lo = i * t;
                    kernels::softmax_row_backward(
                        &attn[lo..lo + i + 1],
                        &d_attn[lo..lo + i + 1],
                        &mut d_scores[lo..lo + i + 1],
                    );
                }
                for s in d_scores.iter_mut() {
                    *s = *s * inv_sqrt;
                }
                if q.requires_grad() {
                    kernels::mm(&d_scores, &k.data(), acc(grads, q), t, t, d);
                }
                if k.requires_grad() {
                    kernels::mm_at(&d_scores, &q.data(), acc(grads, k), t, t, d);
                }
            }
        }
        Op::MaskedCrossEntropy {
            logits,
            targets,
            mask,
            probs,
        } => {
            if logits.requires_grad() {
                let v = logits.shape()[1];
                let n_masked = mask.iter().filter(|&&m| m).count();
                let scale = g[0] / E::from_usize(n_masked);
                let gl = acc(grads, logits);
                for (r, (&target, &m)) in targets.iter().zip(mask).enumerate() {
                    if !m {
                        continue;
                    }
                    let prow = &probs[r * v..(r + 1) * v];
                    let grow = &mut gl[r * v..(r + 1) * v];
                    for (gi, &pi) in grow.iter_mut().zip(prow) {
                        *gi = *gi + scale * pi;
                    }
                    grow[target] = grow[target] - scale;
                }
            }
        }
        Op::LayerNorm {
            x,
            gain,
            normed,
            inv_std,
        } => {
            let (t, d) = (x.shape()[0], x.shape()[1]);
            let gd = gain.data();
            if gain.requires_grad() {
                let gg = acc(grads, gain);
                for r in 0..t {
                    for c in 0..d {
                        gg[c] = gg[c] + g[r * d + c] * normed[r * d + c];
                    }
                }
            }
            if x.requires_grad() {
                let inv_d = E::one() / E::from_usize(d);
                let gx = acc(grads, x);
                for r in 0..t {
                    let lo = r * d;
                    let mut mean_dxhat = E::zero();
                    let mut mean_dxhat_xhat = E::zero();
                    for c in 0..d {
                        let dxhat = g[lo + c] * gd[c];
                        mean_dxhat = mean_dxhat + dxhat;
                        mean_dxhat_xhat = mean_dxhat_xhat + dxhat * normed[lo + c];
                    }
                    mean_dxhat = mean_dxhat * inv_d;
                    mean_dxhat_xhat = mean_dxhat_xhat * inv_d;
                    for c in 0..d {
                        let dxhat = g[lo + c] * gd[c];
                        gx[lo + c] = gx[lo + c]
                            + inv_std[r] * (dxhat - mean_dxhat - normed[lo + c] * mean_dxhat_xhat);
                    }
                }
            }
        }
        Op::WeightedSum { xs, w } => {
            let wd = w.to_vec();
            for (i, x) in xs.iter().enumerate() {
                if x.requires_grad() {
                    let gx = acc(grads, x);
                    for (gj, &gu) in gx.iter_mut().zip(g) {
                        *gj = *gj + wd[i] * gu;
                    }
                }
            }
            if w.requires_grad() {
                let mut dots = vec![E::zero(); xs.len()];
                for (i, x) in xs.iter().enumerate() {
                    let xd = x.data();
                    let mut dot = E::zero();
                    for (&gu, &xv) in g.iter().zip(xd.iter()) {
                        dot = dot + gu * xv;
                    }
                    dots[i] = dot;
                }
                add_into(acc(grads, w), &dots);
            }
        }
        Op::RowWeightedSum { xs, w } => {
            let (t, d) = (xs[0].shape()[0], xs[0].shape()[1]);
            let n = xs.len();
            let wd = w.to_vec();
            for (i, x) in xs.iter().enumerate() {
                if x.requires_grad() {
                    let gx = acc(grads, x);
                    for r in 0..t {
                        let wi = wd[r * n + i];
                        for c in 0..d {
                            gx[r * d + c] = gx[r * d + c] + wi * g[r * d + c];
                        }
                    }
                }
            }
            if w.requires_grad() {
                let gw = acc(grads, w);
                for (i, x) in xs.iter().enumerate() {
                    let xd = x.data();
                    for r in 0..t {
                        let mut dot = E::zero();
                        for c in 0..d {
                            dot = dot + g[r * d + c] * xd[r * d + c];
                        }
                        gw[r * n + i] = gw[r * n + i] + dot;
                    }
                }
            }
        }
        Op::ChunkMean { x, chunk } => {
            if x.requires_grad() {
                let (t, d) = (x.shape()[0], x.shape()[1]);
                let gx = acc(grads, x);
                let t_out = t.div_ceil(*chunk);
                for to in 0..t_out {
                    let lo = to * chunk;
                    let hi = (lo + chunk).min(t);
                    let inv = E::one() / E::from_usize(hi - lo);
                    for r in lo..hi {
                        for c in 0..d {
                            gx[r * d + c] = gx[r * d + c] + g[to * d + c] * inv;
                        }
                    }
                }
            }
        }
        Op::ConcatRows { parts } => {
            let d = parts[0].shape()[1];
            let mut row = 0;
            for p in parts {
                let rows = p.shape()[0];
                if p.requires_grad() {
                    add_into(acc(grads, p), &g[row * d..(row + rows) * d]);
                }
                row += rows;
            }
        }
        Op::Reshape { x } => {
            if x.requires_grad() {
                add_into(acc(grads, x), g);
            }
        }
        Op::Sum { x } => {
            if x.requires_grad() {
                let gx = acc(grads, x);
                for v in gx.iter_mut() {
                    *v = *v + g[0];
                }
            }
        }
    }
}
