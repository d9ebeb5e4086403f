use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds the admissible bound {bound} for bandwidth h={h}")]
    DegreeTooHigh {
        degree: usize,
        bound: usize,
        h: usize,
    },

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("invalid boundary policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension n={n} must exceed 2h={}", 2 * h)]
    Dimension { n: usize, h: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("singular system while computing {0}")]
    Singular(String),

    #[error("{method} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },
}

impl Error {
    /// True for failures of a numerical routine, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular(_) | Error::NoConvergence { .. })
    }
}
