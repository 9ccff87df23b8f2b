use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("alphabet parameter m must be at least 1 (got {0})")]
    InvalidAlphabet(usize),

    #[error("letter index {index} exceeds alphabet bound m = {m}")]
    LetterOutOfRange { index: usize, m: usize },

    #[error("label {label} outside 1..={m}")]
    LabelOutOfRange { label: usize, m: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subset {0} is not admissible here")]
    NotAdmissible(String),

    #[error("subsets {0} and {1} overlap")]
    Overlap(String, String),

    #[error("{subsets} subsets but {labels} labels")]
    LabelCount { subsets: usize, labels: usize },

    #[error("not a valid extraction: {0}")]
    InvalidExtraction(String),

    /// A character was asked for a coefficient beyond its series' truncation.
    #[error("insufficient data: word of length {len} exceeds truncation {max_len}")]
    InsufficientData { len: usize, max_len: usize },
}

impl Error {
    /// True for errors that come from malformed text rather than from
    /// semantically inconsistent (but well-formed) inputs.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
