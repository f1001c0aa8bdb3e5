//! Explicit zero-free region constants for Dirichlet L-functions.
//!
//! The crate evaluates every explicit bound entering the argument — the
//! smoothed test function and its Laplace transform, digamma and
//! zero-counting estimates, the Stechkin parameters, the per-case error
//! budget — and runs the iterative parameter search that turns them into
//! the constant `R0` of each case.
//!
//! Layering, bottom to top:
//!
//! * [`quadrature`], [`special_functions`] — numerical primitives;
//! * [`test_function`], [`trig_polynomials`], [`zero_density`], [`stechkin`] —
//!   the ingredients;
//! * [`cases`], [`error_budget`] — per-case assembly of `e(η)`;
//! * [`optimizer`] — derived parameters, `R0` and the outer iteration;
//! * [`checks`] — the invariant suite behind `zfr check`.

// Preconditions are written as `!(x > 0.0)` on purpose: the negation also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cases;
pub mod checks;
pub mod error;
pub mod error_budget;
pub mod optimizer;
pub mod quadrature;
pub mod special_functions;
pub mod stechkin;
pub mod test_function;
pub mod trig_polynomials;
pub mod zero_density;

pub use cases::{CaseConfig, CaseId};
pub use error::{Result, ZfrError};
pub use error_budget::ErrorCubic;
pub use optimizer::{CaseResult, OptimizerConfig, ParameterPoint};
pub use test_function::ThetaFunction;
