use alloc::string::String;
use core::fmt;

use crate::filtered::Precision;

/// Errors raised by the engine. Checks report failures as data (see
/// [`crate::report`]); these are the conditions under which a computation
/// cannot be carried out at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    /// The input is not known to enough depth to determine the requested output.
    InsufficientPrecision {
        required: u32,
        available: Precision,
    },
    /// The operation does not exist on this model space (e.g. π_t without a φ_c twist).
    UnsupportedModel(String),
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        min: i64,
        max: i64,
    },
    Parse {
        offset: usize,
        expected: String,
    },
    /// Straightening exceeded its step budget.
    RewriteBudget(usize),
    InvalidSpec(String),
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::InsufficientPrecision {
                required,
                available,
            } => {
                write!(
                    f,
                    "insufficient precision: need input known mod U_{required}, have {available}"
                )
            }
            Error::UnsupportedModel(m) => write!(f, "unsupported model: {m}"),
            Error::IndexOutOfRange {
                what,
                index,
                min,
                max,
            } => {
                write!(f, "{what} index {index} out of range {min}..={max}")
            }
            Error::Parse { offset, expected } => {
                write!(f, "parse error at byte {offset}: expected {expected}")
            }
            Error::RewriteBudget(n) => {
                write!(f, "straightening did not terminate within {n} steps")
            }
            Error::InvalidSpec(m) => write!(f, "invalid subalgebra spec: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
