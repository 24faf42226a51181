use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mismatched lengths: {first} has {first_len} entries but {second} has {second_len}")]
    MismatchedLengths {
        first: &'static str,
        first_len: usize,
        second: &'static str,
        second_len: usize,
    },

    #[error("illegal weight {weight} at position {position}: weights must be finite and non-negative")]
    IllegalWeight { position: usize, weight: f64 },

    #[error("unknown winner label {0:?}: expected left, right, tie or draw")]
    UnknownWinner(String),

    #[error("unknown item {0:?}: not present in the index")]
    UnknownItem(String),

    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-positive score {score} for item {item:?}")]
    NonPositiveScore { item: String, score: f64 },

    #[error("no comparison records to resample")]
    EmptyInput,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
