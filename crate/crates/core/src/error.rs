use alloc::string::String;

/// Errors reported by the spectral routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("n*r = {0} is not an integer; coset operations need an integral n*r")]
    NonIntegralRate(f64),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("workload of {required} exceeds the {what} budget of {budget}")]
    TooLarge {
        what: &'static str,
        required: u128,
        budget: u128,
    },
    #[error("index {index} outside [{lo}, {hi})")]
    IndexOutOfRange { index: i128, lo: i128, hi: i128 },
    #[error("fixed point not reached after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("word is not part of the coset partition")]
    NotInPartition,
    #[error("unsupported shift profile: {0}")]
    UnsupportedProfile(String),
    #[error("cannot isolate a root of the rate polynomial in (1,2): {0}")]
    NoRootIsolation(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("lifespan exceeds the cap of {0}")]
    LifespanOverflow(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::InvalidParameter(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
