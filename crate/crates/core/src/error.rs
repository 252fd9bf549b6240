use crate::abelian::AbelianError;

/// Errors surfaced by every layer above the abelian core.
///
/// Variants for which [`Error::is_gap`] holds mean "the stored data or the
/// available closed forms do not cover this input"; they are reported as an
/// `unknown` outcome rather than a failure.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid record {key}: {message}")]
    Invariant { key: String, message: String },
    #[error("range hole: pi_{m}(S^{n}) lies in the declared window but has no record")]
    RangeHole { m: u32, n: u32 },
    #[error("suspension(m={m}, n={n}) violates the Freudenthal theorem: {message}")]
    Freudenthal { m: u32, n: u32, message: String },
    #[error("pi_{m}(S^{n}) is not in the database")]
    NotInDatabase { m: u32, n: u32 },
    #[error("missing record {0}")]
    MissingRecord(String),
    #[error("boundary unknown: {0}")]
    BoundaryUnknown(String),
    #[error("antipodal action unknown on pi_{m}(S^{n})")]
    AntipodalUnknown { m: u32, n: u32 },
    #[error("not determined by the available closed forms: {0}")]
    NotDetermined(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True when missing data, not bad input, blocked the computation.
    pub fn is_gap(&self) -> bool {
        matches!(
            self,
            Error::NotInDatabase { .. }
                | Error::MissingRecord(_)
                | Error::BoundaryUnknown(_)
                | Error::AntipodalUnknown { .. }
                | Error::NotDetermined(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
