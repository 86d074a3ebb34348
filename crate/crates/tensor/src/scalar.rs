use num_traits::Float;

/// Tensor element type. `f32` is the training default; `f64` is used by the
/// verification paths (oracles and gradient checking).
pub trait Scalar: Float + std::fmt::Debug + std::fmt::Display + Default + 'static {
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;

    fn from_usize(v: usize) -> Self {
        Self::from_f64(v as f64)
    }
}

impl Scalar for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(self) -> f64 {
        self
    }
}
