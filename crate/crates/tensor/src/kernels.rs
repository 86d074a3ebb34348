//! Raw slice kernels shared by forward and backward passes.
//!
//! Loops are ordered so the inner loop walks contiguous rows, which lets the
//! compiler vectorize them; these three cover every matrix product the graph
//! needs (plain, A·Bᵀ and Aᵀ·B).

use crate::scalar::Scalar;

/// c[m×n] += a[m×k] · b[k×n]
pub fn mm<E: Scalar>(a: &[E], b: &[E], c: &mut [E], m: usize, k: usize, n: usize) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let crow = &mut c[i * n..(i + 1) * n];
        for (p, &aip) in arow.iter().enumerate() {
            let brow = &b[p * n..(p + 1) * n];
            for (cj, &bj) in crow.iter_mut().zip(brow) {
                *cj = *cj + aip * bj;
            }
        }
    }
}

/// c[m×n] += a[m×k] · b[n×k]ᵀ
pub fn mm_bt<E: Scalar>(a: &[E], b: &[E], c: &mut [E], m: usize, k: usize, n: usize) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), n * k);
    debug_assert_eq!(c.len(), m * n);
    for i in 0..m {
        let arow = &a[i * k..(i + 1) * k];
        let crow = &mut c[i * n..(i + 1) * n];
        for (j, cj) in crow.iter_mut().enumerate() {
            let brow = &b[j * k..(j + 1) * k];
            let mut acc = E::zero();
            for (&ap, &bp) in arow.iter().zip(brow) {
                acc = acc + ap * bp;
            }
            *cj = *cj + acc;
        }
    }
}

/// c[m×n] += a[k×m]ᵀ · b[k×n]
pub fn mm_at<E: Scalar>(a: &[E], b: &[E], c: &mut [E], m: usize, k: usize, n: usize) {
    debug_assert_eq!(a.len(), k * m);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(c.len(), m * n);
    for p in 0..k {
        let arow = &a[p * m..(p + 1) * m];
        let brow = &b[p * n..(p + 1) * n];
        for (i, &api) in arow.iter().enumerate() {
            let crow = &mut c[i * n..(i + 1) * n];
            for (cj, &bj) in crow.iter_mut().zip(brow) {
                *cj = *cj + api * bj;
            }
        }
    }
}

/// Numerically stable in-place softmax of one row.
pub fn softmax_row<E: Scalar>(row: &mut [E]) {
    let mut max = row[0];
    for &v in row.iter() {
        if v > max {
            max = v;
        }
    }
    let mut denom = E::zero();
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        denom = denom + *v;
    }
    for v in row.iter_mut() {
        *v = *v / denom;
    }
}

/// Gradient of a row softmax given its output `y` and upstream `dy`.
pub fn softmax_row_backward<E: Scalar>(y: &[E], dy: &[E], dx: &mut [E]) {
    let mut dot = E::zero();
    for (&yi, &di) in y.iter().zip(dy) {
        dot = dot + yi * di;
    }
    for ((xi, &yi), &di) in dx.iter_mut().zip(y).zip(dy) {
        *xi = *xi + yi * (di - dot);
    }
}
