use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// An enclosure is too wide to decide the question rigorously.
    /// Callers may retry with a tighter enclosure or more mantissa bits.
    InsufficientPrecision(String),
    /// A partial-quotient sequence ended before the requested depth.
    DepthUnavailable { requested: usize, available: usize },
    /// Some |k·ω| enclosure contains 0: ω is resonant, or the enclosure
    /// of ω is too coarse to rule resonance out.
    Resonance(Vec<i64>),
    /// A growth rule produced integers beyond the configured size budget.
    GrowthBudget { index: usize, achieved: usize },
    /// Invalid argument or parameter combination.
    InvalidInput(String),
    /// Malformed textual spec (number spec, set spec, config file, ...).
    Parse(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientPrecision(msg) => write!(f, "insufficient precision: {msg}"),
            Error::DepthUnavailable {
                requested,
                available,
            } => write!(
                f,
                "depth {requested} unavailable: partial quotients end at index {available}"
            ),
            Error::Resonance(k) => {
                write!(f, "resonance within precision: |k·ω| encloses 0 at k = {k:?}")
            }
            Error::GrowthBudget { index, achieved } => write!(
                f,
                "growth rule exceeds size budget at index {index}; achieved depth {achieved}"
            ),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
