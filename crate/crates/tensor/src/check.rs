//! Central-difference gradient verification.

use crate::backward::backward;
use crate::error::{Result, TensorError};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Default finite-difference step, meant for 64-bit runs.
pub const DEFAULT_GRAD_CHECK_STEP: f64 = 1e-5;

/// Compare the autodiff gradient of a scalar-valued function against central
/// differences, coordinate by coordinate of `x`. The closure must rebuild the
/// loss from the current contents of `x` on every call (it is invoked once
/// for the analytic gradient and twice per coordinate for the numeric one).
///
/// Returns `max_i |a_i − n_i| / max(1, |a_i|, |n_i|)`.
pub fn grad_check<E, F>(mut f: F, x: &Tensor<E>, h: E) -> Result<f64>
where
    E: Scalar,
    F: FnMut() -> Result<Tensor<E>>,
{
    if !x.requires_grad() {
        return Err(TensorError::NoGrad);
    }
    if !(h > E::zero()) {
        return Err(TensorError::NonFinite { op: "grad_check" });
    }

    x.zero_grad();
    let loss = f()?;
    if !loss.item()?.is_finite() {
        return Err(TensorError::NonFinite { op: "grad_check" });
    }
    backward(&loss)?;
    let analytic = x.grad().ok_or(TensorError::NoGrad)?;

    let two_h = (h + h).to_f64();
    let mut max_err = 0.0f64;
    for i in 0..x.numel() {
        let orig = x.get(i);
        x.set(i, orig + h);
        let f_plus = f()?.item()?;
        x.set(i, orig - h);
        let f_minus = f()?.item()?;
        x.set(i, orig);
        if !f_plus.is_finite() || !f_minus.is_finite() {
            return Err(TensorError::NonFinite { op: "grad_check" });
        }
        let numeric = (f_plus.to_f64() - f_minus.to_f64()) / two_h;
        let a = analytic[i].to_f64();
        let denom = 1.0f64.max(a.abs()).max(numeric.abs());
        let err = (a - numeric).abs() / denom;
        if err > max_err {
            max_err = err;
        }
    }
    Ok(max_err)
}
