use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("post-selection failed: P(left) = {prob_left:e}, P(spin | left) = {prob_spin:e}")]
    PostSelectionFailed { prob_left: f64, prob_spin: f64 },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("escaped mode Out({capacity}) would overflow after {elapsed} periods")]
    OutModeOverflow { elapsed: usize, capacity: usize },

    #[error("cannot invert a period: state is at t = 0")]
    NothingToInvert,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "phase budget 2N*p0*dx = {phase_budget} exceeds 1; the small-imprint model does not apply"
    )]
    ModelValidity { phase_budget: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
