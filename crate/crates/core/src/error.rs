use thiserror::Error;

pub type Result<T> = std::result::Result<T, ZenoError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZenoError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative time {0}")]
    NegativeTime(f64),

    /// Quadrature did not reach its tolerance. The partial estimate is kept for
    /// diagnostics only and must not be reported as a result.
    #[error("quadrature did not converge after {evaluations} evaluations (estimate {estimate:e}, error {err_estimate:e})")]
    NonConvergence {
        estimate: f64,
        err_estimate: f64,
        evaluations: usize,
    },

    #[error("energy {energy} lies within {window:e} of the band edge")]
    SingularPoint { energy: f64, window: f64 },

    #[error("time {time} exceeds grid resolvability (panel width {panel_width:e})")]
    Unresolvable { time: f64, panel_width: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl ZenoError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        ZenoError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
