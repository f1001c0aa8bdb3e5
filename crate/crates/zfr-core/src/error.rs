//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the numerical pipeline.
///
/// The variants separate genuine mathematical infeasibility (a parameter
/// point for which the zero-free-region argument does not close) from
/// numerical trouble (a quadrature that failed to converge) and from caller
/// mistakes (arguments outside the domain of a formula).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZfrError {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A documented precondition of a bound does not hold.
    #[error("precondition violated in {op}: {detail}")]
    Precondition { op: &'static str, detail: String },

    /// Numerical method failed (non-convergence, non-finite values).
    #[error("numerical failure in {op}: {detail}")]
    Numeric { op: &'static str, detail: String },

    /// The parameter point is infeasible (e.g. non-positive main-term
    /// denominator, no admissible `t0`).
    #[error("infeasible parameter point: {detail}")]
    Infeasible { detail: String },

    /// A root or fixed-point solver could not bracket or converge.
    #[error("solver failure in {op}: {detail}")]
    Solver { op: &'static str, detail: String },

    /// Invalid configuration (unknown case identifier, bad option).
    #[error("configuration error: {0}")]
    Config(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, ZfrError>;

impl ZfrError {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        ZfrError::Domain { op, detail: detail.into() }
    }

    pub(crate) fn precondition(op: &'static str, detail: impl Into<String>) -> Self {
        ZfrError::Precondition { op, detail: detail.into() }
    }

    pub(crate) fn numeric(op: &'static str, detail: impl Into<String>) -> Self {
        ZfrError::Numeric { op, detail: detail.into() }
    }

    pub(crate) fn solver(op: &'static str, detail: impl Into<String>) -> Self {
        ZfrError::Solver { op, detail: detail.into() }
    }

    pub(crate) fn infeasible(detail: impl Into<String>) -> Self {
        ZfrError::Infeasible { detail: detail.into() }
    }

    /// True for errors that mean "this parameter point does not work" as
    /// opposed to a bug or a numerical breakdown.  The optimizer treats
    /// these as `R0 = +inf` while scanning.
    pub fn is_infeasibility(&self) -> bool {
        matches!(self, ZfrError::Infeasible { .. } | ZfrError::Precondition { .. })
    }
}
