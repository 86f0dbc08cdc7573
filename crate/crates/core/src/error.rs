use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A value handed to an operation violates its precondition.
    InvalidInput(String),
    /// A configuration is inconsistent (bad radius range, unknown tag, ...).
    Config(String),
    /// Rejection sampling inside a hull failed to land a point.
    DegenerateHull { attempts: usize },
    /// No region was available to allocate proposals to.
    NothingSelected,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::DegenerateHull { attempts } => {
                write!(f, "degenerate hull: no sample accepted after {attempts} attempts")
            }
            Error::NothingSelected => f.write_str("no hull selected for allocation"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
