use thiserror::Error;

use crate::spinalg::Side;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    /// The two observables on one side commute (relative angle is a multiple of π),
    /// so no Hardy state exists for the setup.
    #[error("degenerate setup: relative angle on side {side} is {degrees}° (a multiple of 180°)")]
    DegenerateSetup { side: Side, degrees: f64 },

    #[error("coefficients are not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("report does not exhibit a Hardy contradiction")]
    NotAHardyState,

    #[error("setting pair {setting} has no recorded trials")]
    InsufficientSamples { setting: String },

    #[error("optimum is not a golden-ratio maximum (max deviation {max_deviation:e})")]
    NotGolden { max_deviation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, HardyError>;
