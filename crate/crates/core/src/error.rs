use thiserror::Error;

use crate::state::Label;

/// Errors raised by state manipulation, cavity solvers and protocol drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A subsystem label appears twice in one state.
    #[error("duplicate subsystem {0}")]
    DuplicateSubsystem(Label),

    /// A requested subsystem is not part of the state.
    #[error("unknown subsystem {0}")]
    UnknownSubsystem(Label),

    /// Amplitude array or operator has the wrong size.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Measurement or normalization of a state with zero norm.
    #[error("state has zero norm")]
    ZeroNorm,

    /// GHZ index outside `1..=max`.
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// A protocol stage was handed a state it does not accept.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Cavity parameters violate g >= 0, kappa > 0, kappa_s >= 0, gamma > 0.
    #[error("invalid cavity parameters: {0}")]
    InvalidParams(String),

    /// No root of |t0| - |r_h| in the scanned bracket.
    #[error("balanced detuning unsatisfiable on [{lo}, {hi}]: min residual {min_residual:.3e}")]
    NoBalancedRoot { lo: f64, hi: f64, min_residual: f64 },

    /// No pi/2 phase difference reachable in the scanned bracket.
    #[error("pi/2 detuning unsatisfiable on [{lo}, {hi}]: phase difference spans [{min_phase:.6}, {max_phase:.6}]")]
    NoPhaseRoot { lo: f64, hi: f64, min_phase: f64, max_phase: f64 },

    /// Metric formula with a vanishing denominator.
    #[error("degenerate coefficients: {0}")]
    DegenerateCoefficients(&'static str),

    /// Label text could not be parsed.
    #[error("malformed label {0:?}: expected i:sign:j:sign")]
    MalformedLabel(String),

    /// CSV serialization failure.
    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
