use thiserror::Error;

/// Errors raised by the algebra routines.
///
/// Verification failures (a certificate that does not check, a membership
/// query that comes back negative) are ordinary values in the reports, not
/// errors. This type is for malformed input and violated preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not computable: {0}")]
    NotComputable(String),

    #[error("inconsistent tower: {0}")]
    IncompatibleTower(String),

    #[error("lift failed at stage s = {stage}: {reason}")]
    LiftFailed { stage: u32, reason: String },

    #[error("symbol requires the Steinberg relation: {0}")]
    SteinbergRequired(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("counterexample found: {0}")]
    Counterexample(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
