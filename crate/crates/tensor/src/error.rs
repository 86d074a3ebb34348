use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("{op}: dimension mismatch between shapes {lhs:?} and {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    #[error("{op}: invalid shape {shape:?} ({msg})")]
    InvalidShape {
        op: &'static str,
        shape: Vec<usize>,
        msg: String,
    },
    #[error("axis {axis} is out of range for shape {shape:?}")]
    InvalidAxis { axis: usize, shape: Vec<usize> },
    #[error("index {id} is out of range for a table of {len} rows")]
    IndexOutOfRange { id: usize, len: usize },
    #[error("{op}: empty input")]
    EmptyInput { op: &'static str },
    #[error("{op}: expected a scalar, got shape {shape:?}")]
    NotScalar { op: &'static str, shape: Vec<usize> },
    #[error("{op}: non-finite value encountered")]
    NonFinite { op: &'static str },
    #[error("masked cross-entropy needs at least one supervised position")]
    EmptySupervision,
    #[error("tensor does not carry a gradient")]
    NoGrad,
}

pub type Result<T> = std::result::Result<T, TensorError>;
