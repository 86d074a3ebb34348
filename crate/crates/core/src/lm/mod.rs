//! Frozen stand-ins for the speech encoder and the instruction-following
//! decoder, plus prompt assembly and greedy decoding. Nothing in this module
//! is ever trained; gradients flow through it into the projector output.

mod decoder;
mod encoder;
mod prompt;
pub mod vocab;

pub use decoder::FrozenDecoder;
pub use encoder::FrozenEncoder;
pub use prompt::{assemble_prompt, greedy_decode, PromptLayout};
