//! Character-level token vocabulary: four special markers, the lowercase
//! latin letters and the space. The table is sized with headroom so the
//! embedding matrix shape stays fixed if symbols are added.

use crate::error::{Error, Result};

pub const PAD: usize = 0;
pub const USER: usize = 1;
pub const END: usize = 2;
pub const ASSISTANT: usize = 3;

const CHAR_BASE: usize = 4;
pub const VOCAB_SIZE: usize = 64;

/// Instruction placed between the audio rows and the end marker.
pub const INSTRUCTION: &str = "Transcribe speech to text";

pub fn encode_char(c: char) -> Option<usize> {
    match c {
        'a'..='z' => Some(CHAR_BASE + (c as usize - 'a' as usize)),
        ' ' => Some(CHAR_BASE + 26),
        _ => None,
    }
}

pub fn decode_token(id: usize) -> Option<char> {
    match id.checked_sub(CHAR_BASE)? {
        i @ 0..=25 => Some((b'a' + i as u8) as char),
        26 => Some(' '),
        _ => None,
    }
}

/// Tokenize text; uppercase folds to lowercase, anything outside the
/// character set is an error.
pub fn encode_text(s: &str) -> Result<Vec<usize>> {
    s.chars()
        .flat_map(|c| c.to_lowercase())
        .map(|c| encode_char(c).ok_or(Error::UnknownChar(c)))
        .collect()
}

/// Render token ids back to text; specials and unused ids are dropped.
pub fn decode_tokens(ids: &[usize]) -> String {
    ids.iter().filter_map(|&id| decode_token(id)).collect()
}

pub fn instruction_ids() -> Vec<usize> {
    encode_text(INSTRUCTION).expect("instruction uses only in-vocabulary characters")
}
