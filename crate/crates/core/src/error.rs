use thiserror::Error;

/// Errors surfaced by the library. Validation of candidate graphs reports
/// through [`crate::graph::Violation`] instead; this type covers the
/// fallible operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unstable type: 2g-2+n = {0} must be positive")]
    Unstable(i64),
    #[error("label {0} out of range 1..={1}")]
    LabelOutOfRange(u8, u8),
    #[error("no Feynman rule for vertex type ({0},{1})")]
    MissingRule(u32, u32),
    #[error("truncation bound {0} exceeds supported range")]
    Truncation(u32),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
