use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Tensor(#[from] mosa_tensor::TensorError),
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}:{line}: {msg}")]
    ManifestFormat {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("integrity error for utterance '{id}': {msg}")]
    Integrity { id: String, msg: String },
    #[error("numeric error: non-finite loss at utterance '{id}'")]
    NonFiniteLoss { id: String },
    #[error("checkpoint version {found} is unsupported (expected {expected})")]
    CheckpointVersion { found: u32, expected: u32 },
    #[error("corrupt file '{path}': {msg}")]
    Corruption { path: String, msg: String },
    #[error("undefined metric: empty reference after normalization")]
    EmptyReference,
    #[error("step {step} is out of range (total steps {total})")]
    StepOutOfRange { step: u64, total: u64 },
    #[error("unknown token character {0:?}")]
    UnknownChar(char),
    #[error("i/o error on '{path}': {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
