use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Extension degree outside `1..=MAX_DEGREE`.
    InvalidDegree(usize),
    /// Modulus is not a monic polynomial of the requested degree over GF(3).
    MalformedModulus(String),
    /// Modulus has a nontrivial factor; coefficients are constant term first.
    ReducibleModulus { factor: Vec<u8> },
    /// An operation was called outside its domain (inverse of zero, `K(0)`, ...).
    Domain(String),
    /// Two routes to the same quantity disagreed, or an exactness assertion failed.
    Invariant {
        what: String,
        expected: String,
        actual: String,
    },
    /// The request is beyond the desk-scale limits of exhaustive methods.
    UnsupportedScale(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(
        what: impl Into<String>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        use alloc::string::ToString;
        Error::Invariant {
            what: what.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedScale(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDegree(r) => write!(f, "extension degree {r} is outside 1..=8"),
            Error::MalformedModulus(msg) => write!(f, "malformed modulus: {msg}"),
            Error::ReducibleModulus { factor } => {
                write!(f, "modulus is reducible; it has the factor ")?;
                for (i, c) in factor.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Invariant {
                what,
                expected,
                actual,
            } => write!(f, "{what}: expected {expected}, got {actual}"),
            Error::UnsupportedScale(msg) => write!(f, "unsupported scale: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
