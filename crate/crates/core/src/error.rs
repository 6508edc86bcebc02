use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    Dimension {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    /// A claimed spectrum failed exact (or tolerance) certification.
    #[error("spectrum certification failed ({identity}): {witness}")]
    Spectrum { identity: String, witness: String },

    #[error("m = {m} exceeds the resource cap of {cap}")]
    Resource { m: usize, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// An operator that should restrict to a scalar did not.
    #[error("identity failure ({identity}): {witness}")]
    Identity { identity: String, witness: String },

    #[error("degenerate bound at (m={m}, r={r}, k={k}): {reason}")]
    DegenerateBound {
        m: usize,
        r: usize,
        k: usize,
        reason: String,
    },

    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
