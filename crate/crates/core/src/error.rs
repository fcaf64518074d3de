use thiserror::Error;

use crate::quadrature::IntegralEstimate;

/// Errors produced by the state engines, the integrators and the quantifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("negative weight at index {index}: {value}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights not normalized: sum = {sum}")]
    Unnormalized { sum: f64 },

    #[error("covariance is not positive definite for ordering s = {s} (min eigenvalue {min_eigenvalue})")]
    NotPositiveDefinite { s: f64, min_eigenvalue: f64 },

    #[error(
        "amplifier margin {given} cannot certify tail below {target:e}; need at least {required}"
    )]
    MarginTooSmall {
        given: usize,
        required: usize,
        target: f64,
    },

    #[error("tolerance {requested:e} unreachable within subdivision budget (best error {:e})", best.abs_error_bound)]
    QuadratureFailed {
        requested: f64,
        best: IntegralEstimate,
    },

    #[error("more than {max_roots} sign changes in [{lo}, {hi}]")]
    RootBudgetExceeded { max_roots: usize, lo: f64, hi: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("closed-form baseline {closed_form} disagrees with quadrature {quadrature}")]
    BaselineMismatch { closed_form: f64, quadrature: f64 },

    #[error("no sign change of M on [{lo}, {hi}]: M(lo) = {m_lo}, M(hi) = {m_hi}")]
    NoCrossing {
        lo: f64,
        hi: f64,
        m_lo: f64,
        m_hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_param(
    ok: bool,
    name: &'static str,
    value: f64,
    reason: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
