use std::fmt;

/// Errors surfaced by the library.
#[derive(Debug, Clone)]
pub enum Error {
    /// A precondition on the inputs was violated.
    InvalidArgument(String),
    /// A degenerate parameter configuration that the closed forms do not
    /// cover (double root c = ±1, or a vanishing integrating exponent).
    Degenerate(String),
    /// The iterative eigensolver hit its sweep cap; partial results attached.
    NoConvergence { partial: Vec<f64>, iterations: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate parameters: {msg}"),
            Error::NoConvergence { iterations, .. } => {
                write!(f, "eigensolver failed to converge after {iterations} iterations")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
