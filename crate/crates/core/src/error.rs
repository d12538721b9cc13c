use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SlicedError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlicedError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("enumeration cap exceeded: {count} > {cap}; use randomized mode")]
    CapExceeded { count: u128, cap: u128 },
    #[error("decode failure: {0}")]
    Decode(DecodeFailure),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Why a decoder gave up. `code()` is stable and machine readable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeFailure {
    MalformedWord(String),
    AnchorNotFound,
    AnchorAmbiguous(usize),
    ReedSolomon(String),
    Codebook(String),
    Matching(String),
    Codec(String),
}

impl DecodeFailure {
    pub fn code(&self) -> &'static str {
        match self {
            Self::MalformedWord(_) => "malformed_word",
            Self::AnchorNotFound => "anchor_not_found",
            Self::AnchorAmbiguous(_) => "anchor_ambiguous",
            Self::ReedSolomon(_) => "reed_solomon",
            Self::Codebook(_) => "codebook",
            Self::Matching(_) => "matching",
            Self::Codec(_) => "deletion_codec",
        }
    }
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MalformedWord(s) => write!(f, "malformed word: {s}"),
            Self::AnchorNotFound => write!(f, "no string carries the all-ones index"),
            Self::AnchorAmbiguous(n) => write!(f, "{n} strings could carry the all-ones index"),
            Self::ReedSolomon(s) => write!(f, "Reed-Solomon decoding failed: {s}"),
            Self::Codebook(s) => write!(f, "recovered index set is not a valid codebook: {s}"),
            Self::Matching(s) => write!(f, "cannot match received strings to indices: {s}"),
            Self::Codec(s) => write!(f, "deletion codec failed: {s}"),
        }
    }
}

impl SlicedError {
    pub(crate) fn decode(f: DecodeFailure) -> Self {
        Self::Decode(f)
    }
}
