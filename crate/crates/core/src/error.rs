use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} entries in r, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("divisibility violation: r[{index}] = {lower} does not divide r[{next}] = {upper}")]
    DivisibilityViolation {
        index: usize,
        next: usize,
        lower: u64,
        upper: u64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain too small: {0}")]
    DomainTooSmall(String),

    #[error("capacity exceeded: {requested} table entries requested, budget is {budget}")]
    CapacityExceeded { requested: u64, budget: u64 },

    #[error("cutoff exceeded: t = {t} is above the brute-force cutoff {cutoff}")]
    CutoffExceeded { t: f64, cutoff: f64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("precision ceiling exceeded: {0}")]
    PrecisionCeilingExceeded(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("search failed: no admissible U in [{u_min}, {u_max}]")]
    SearchFailed { u_min: u64, u_max: u64 },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad parameters or inputs outside the mathematical domain.
    Domain,
    /// A configured budget, cutoff or precision limit was hit.
    Budget,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::LengthMismatch { .. }
            | Error::DivisibilityViolation { .. }
            | Error::InvalidArgument(_)
            | Error::DomainTooSmall(_) => ErrorClass::Domain,
            Error::CapacityExceeded { .. }
            | Error::CutoffExceeded { .. }
            | Error::BudgetExceeded(_)
            | Error::PrecisionCeilingExceeded(_)
            | Error::QuadratureFailure(_)
            | Error::SearchFailed { .. }
            | Error::Overflow(_) => ErrorClass::Budget,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
