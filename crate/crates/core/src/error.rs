use thiserror::Error;

use crate::green::Kernel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numerical building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {name} = {value} lies outside [0, 1]")]
    Domain { name: &'static str, value: f64 },

    #[error("kernel {0:?} has no closed-form row integral")]
    NoAnalyticIntegral(Kernel),

    #[error("kernel {0:?} cannot be used in a quadrature row")]
    UnsupportedKernel(Kernel),

    #[error("number of subintervals must be at least {min}, got {n}")]
    TooFewIntervals { n: usize, min: usize },

    #[error("Simpson rules need an even number of subintervals, got {0}")]
    OddIntervals(usize),

    #[error("node index {index} out of range for a grid with {n} subintervals")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("grid mismatch: {left} vs {right} subintervals")]
    GridMismatch { left: usize, right: usize },

    #[error("expected {expected} values for the grid, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value {value} at {context}")]
    NonFinite { value: f64, context: String },
}
