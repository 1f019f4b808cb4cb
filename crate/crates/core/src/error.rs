use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands were created under contexts with different fraction bit counts.
    ContextMismatch {
        left: usize,
        right: usize,
    },
    DivisionByZero,
    /// Square or fourth root of a negative value.
    NegativeRoot,
    /// More decimal digits were requested than the context carries.
    DigitsExceedContext {
        requested: usize,
        available: usize,
    },
    Parse {
        input: String,
        reason: &'static str,
    },
    /// A digit count of zero, or a guard/digit combination that overflows.
    InvalidDigits(usize),
    /// An iteration variable left its admissible interval; the working
    /// precision has been exhausted.
    OutOfRange {
        quantity: &'static str,
    },
    NonPositive {
        quantity: &'static str,
    },
    NotConverged {
        what: &'static str,
        refinements: u32,
    },
    PrecisionInsufficient {
        needed: usize,
        available: usize,
    },
    MalformedDigits(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ContextMismatch { left, right } => write!(
                f,
                "precision context mismatch: {left} vs {right} fraction bits"
            ),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::NegativeRoot => f.write_str("root of a negative value"),
            Error::DigitsExceedContext {
                requested,
                available,
            } => write!(
                f,
                "{requested} digits requested but the context only carries {available}"
            ),
            Error::Parse { input, reason } => write!(f, "cannot parse {input:?}: {reason}"),
            Error::InvalidDigits(d) => write!(f, "invalid digit count {d}"),
            Error::OutOfRange { quantity } => {
                write!(
                    f,
                    "{quantity} left its admissible range (precision exhausted)"
                )
            }
            Error::NonPositive { quantity } => write!(f, "{quantity} must be positive"),
            Error::NotConverged { what, refinements } => {
                write!(f, "{what} did not converge after {refinements} refinements")
            }
            Error::PrecisionInsufficient { needed, available } => write!(
                f,
                "needs at least {needed} digits of working precision, context has {available}"
            ),
            Error::MalformedDigits(s) => write!(f, "malformed digit string {s:?}"),
        }
    }
}

impl core::error::Error for Error {}
