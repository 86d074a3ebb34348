use std::cell::{Cell, Ref, RefCell, RefMut};
use std::rc::Rc;

use crate::error::{Result, TensorError};
use crate::ops::Op;
use crate::scalar::Scalar;

thread_local! {
    static NEXT_ID: Cell<u64> = const { Cell::new(0) };
}

fn fresh_id() -> u64 {
    NEXT_ID.with(|c| {
        let id = c.get();
        c.set(id + 1);
        id
    })
}

pub(crate) struct TensorInner<E: Scalar> {
    pub(crate) id: u64,
    pub(crate) shape: Vec<usize>,
    pub(crate) data: RefCell<Vec<E>>,
    pub(crate) requires_grad: bool,
    pub(crate) grad: RefCell<Option<Vec<E>>>,
    pub(crate) op: Option<Op<E>>,
}

/// Handle to one node of the computation graph. Cloning is cheap; clones
/// share storage. A graph and its tensors stay on one thread; independent
/// model instances may run on different threads.
pub struct Tensor<E: Scalar> {
    pub(crate) inner: Rc<TensorInner<E>>,
}

impl<E: Scalar> Clone for Tensor<E> {
    fn clone(&self) -> Self {
        Tensor {
            inner: Rc::clone(&self.inner),
        }
    }
}

impl<E: Scalar> std::fmt::Debug for Tensor<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tensor")
            .field("shape", &self.inner.shape)
            .field("requires_grad", &self.inner.requires_grad)
            .finish()
    }
}

impl<E: Scalar> Tensor<E> {
    fn build(shape: Vec<usize>, data: Vec<E>, requires_grad: bool, op: Option<Op<E>>) -> Self {
        debug_assert_eq!(shape.iter().product::<usize>(), data.len());
        Tensor {
            inner: Rc::new(TensorInner {
                id: fresh_id(),
                shape,
                data: RefCell::new(data),
                requires_grad,
                grad: RefCell::new(None),
                op,
            }),
        }
    }

    /// Constant leaf (no gradient).
    pub fn from_vec(shape: &[usize], data: Vec<E>) -> Result<Self> {
        let numel: usize = shape.iter().product();
        if numel != data.len() {
            return Err(TensorError::InvalidShape {
                op: "from_vec",
                shape: shape.to_vec(),
                msg: format!("shape wants {numel} elements, data has {}", data.len()),
            });
        }
        Ok(Self::build(shape.to_vec(), data, false, None))
    }

    /// Trainable leaf: participates in backward and accumulates a gradient.
    pub fn param(shape: &[usize], data: Vec<E>) -> Result<Self> {
        let t = Self::from_vec(shape, data)?;
        // sole owner at this point, safe to rebuild with the flag set
        let inner = Rc::try_unwrap(t.inner).ok().expect("fresh tensor is unshared");
        Ok(Tensor {
            inner: Rc::new(TensorInner {
                requires_grad: true,
                ..inner
            }),
        })
    }

    pub fn zeros(shape: &[usize]) -> Self {
        let numel: usize = shape.iter().product();
        Self::build(shape.to_vec(), vec![E::zero(); numel], false, None)
    }

    pub fn scalar(v: E) -> Self {
        Self::build(vec![1], vec![v], false, None)
    }

    pub(crate) fn from_op(shape: Vec<usize>, data: Vec<E>, op: Op<E>) -> Self {
        let requires_grad = op.inputs().iter().any(|t| t.requires_grad());
        Self::build(shape, data, requires_grad, Some(op))
    }

    pub(crate) fn id(&self) -> u64 {
        self.inner.id
    }

    pub(crate) fn op(&self) -> Option<&Op<E>> {
        self.inner.op.as_ref()
    }

    pub fn shape(&self) -> &[usize] {
        &self.inner.shape
    }

    pub fn rank(&self) -> usize {
        self.inner.shape.len()
    }

    pub fn numel(&self) -> usize {
        self.inner.shape.iter().product()
    }

    pub fn requires_grad(&self) -> bool {
        self.inner.requires_grad
    }

    pub fn data(&self) -> Ref<'_, Vec<E>> {
        self.inner.data.borrow()
    }

    pub fn data_mut(&self) -> RefMut<'_, Vec<E>> {
        self.inner.data.borrow_mut()
    }

    pub fn to_vec(&self) -> Vec<E> {
        self.inner.data.borrow().clone()
    }

    pub fn get(&self, idx: usize) -> E {
        self.inner.data.borrow()[idx]
    }

    pub fn set(&self, idx: usize, v: E) {
        self.inner.data.borrow_mut()[idx] = v;
    }

    /// Overwrite the stored values; the shape stays fixed.
    pub fn set_data(&self, data: &[E]) -> Result<()> {
        if data.len() != self.numel() {
            return Err(TensorError::InvalidShape {
                op: "set_data",
                shape: self.inner.shape.clone(),
                msg: format!("got {} elements", data.len()),
            });
        }
        self.inner.data.borrow_mut().copy_from_slice(data);
        Ok(())
    }

    /// Scalar extraction; errors on anything but a single-element tensor.
    pub fn item(&self) -> Result<E> {
        if self.numel() != 1 {
            return Err(TensorError::NotScalar {
                op: "item",
                shape: self.inner.shape.clone(),
            });
        }
        Ok(self.inner.data.borrow()[0])
    }

    pub fn grad(&self) -> Option<Vec<E>> {
        self.inner.grad.borrow().clone()
    }

    pub fn zero_grad(&self) {
        *self.inner.grad.borrow_mut() = None;
    }

    pub(crate) fn accumulate_grad(&self, delta: &[E]) {
        debug_assert_eq!(delta.len(), self.numel());
        let mut slot = self.inner.grad.borrow_mut();
        match slot.as_mut() {
            Some(g) => {
                for (gi, di) in g.iter_mut().zip(delta) {
                    *gi = *gi + *di;
                }
            }
            None => *slot = Some(delta.to_vec()),
        }
    }
}
