use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    Domain(&'static str),
    /// `n` exceeds the range covered by the sieve.
    OutOfRange { n: u64, limit: u64 },
    /// The requested sieve would exceed the memory cap.
    Resource { limit: u64, max_limit: u64 },
    /// The factors do not form an ordered factorization of `n`.
    InvalidTuple { n: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::OutOfRange { n, limit } => {
                write!(f, "{n} is outside the sieve range [1, {limit}]")
            }
            Error::Resource { limit, max_limit } => write!(
                f,
                "sieve limit {limit} exceeds the memory cap (at most {max_limit} entries)"
            ),
            Error::InvalidTuple { n } => {
                write!(f, "factors do not form an ordered factorization of {n}")
            }
        }
    }
}

impl core::error::Error for Error {}
