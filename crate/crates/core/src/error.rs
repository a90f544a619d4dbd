use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.  Variants mirror the failure modes of the public
/// operations; `Invalid` and `Parse` cover malformed inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("monomial is not invariant: {0}")]
    NotInvariant(String),
    #[error("slope undefined: theta-weight is zero")]
    ZeroThetaWeight,
    #[error("package has no stable support")]
    NoStableSupport,
    #[error("enumeration bounds produced no invariant monomial")]
    EmptyEnumeration,
    #[error("reduction pair is not normalized (minimum entry must be 0)")]
    NotNormalized,
    #[error("delta is already zero; no blowup step applies")]
    DeltaZero,
    #[error("mu vector must be normalized (minimum entry 0)")]
    BadMu,
    #[error("component {0} is not a rational tail")]
    NotATail(String),
    #[error("negative order at contracted point: {0}")]
    NegativeOrder(String),
    #[error("bridge has nonzero degree {0}")]
    NonzeroDegree(i64),
    #[error("component {0} is neither a rational tail nor a rational bridge")]
    NotTailOrBridge(String),
    #[error("inconsistent section divisor: {0}")]
    InconsistentDivisor(String),
    #[error("every section vanishes identically near the requested point")]
    AllZeroNearX,
    #[error("monomial set is not in common theta-weight form")]
    OmegaNotNormalized,
    #[error("inconsistent MSP component data: {0}")]
    InconsistentFlags(String),
    #[error("no valid ray system found")]
    NoValidRays,
    #[error("empty interval")]
    EmptyInterval,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
