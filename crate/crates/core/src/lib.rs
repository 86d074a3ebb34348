//! Softmax-gated mixture of simple adapters for aligning a frozen speech
//! encoder with a frozen language model, plus the data, training and
//! evaluation machinery to exercise the architecture end to end on synthetic
//! multilingual corpora.

pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod lm;
pub mod model;
pub mod nn;
pub mod projector;
pub mod rng;
pub mod train;

pub use error::{Error, Result};
