//! Zero-counting bounds for Dirichlet L-functions, the tail weights `w1`,
//! `w2`, and the per-index zero-sum weights `s0(k, t0)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZfrError};
use crate::special_functions::{log_zeta2_tail, zeta2_tail};

/// Constants of the explicit zero-counting estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityConstants {
    pub c1: f64,
    pub c2: f64,
}

impl DensityConstants {
    /// The published constants, bit-exact decimal literals.
    pub const PUBLISHED: DensityConstants = DensityConstants { c1: 0.91845, c2: 5.36927 };
}

impl Default for DensityConstants {
    fn default() -> Self {
        Self::PUBLISHED
    }
}

fn check_tq(op: &'static str, t: f64, q: f64) -> Result<()> {
    if !(t >= 1.0 && q >= 1.0) {
        return Err(ZfrError::precondition(op, format!("need T >= 1 and q >= 1, got T = {t}, q = {q}")));
    }
    Ok(())
}

fn main_count(t: f64, q: f64) -> f64 {
    t / PI * (q * t / (2.0 * PI * std::f64::consts::E)).ln()
}

/// Upper count `N1(T, q) = (T/π) log(qT/2πe) + c1 log(qT) + c2`.
pub fn n_upper(t: f64, q: f64) -> Result<f64> {
    check_tq("n_upper", t, q)?;
    let c = DensityConstants::PUBLISHED;
    Ok(main_count(t, q) + c.c1 * (q * t).ln() + c.c2)
}

/// Lower count `N2(T, q) = (T/π) log(qT/2πe) − c1 log(qT) − c2`.
pub fn n_lower(t: f64, q: f64) -> Result<f64> {
    check_tq("n_lower", t, q)?;
    let c = DensityConstants::PUBLISHED;
    Ok(main_count(t, q) - c.c1 * (q * t).ln() - c.c2)
}

/// Which constant multiplies `Σ 1/n²` inside `w2`.
///
/// Two readings exist, `log π / π` and `log π / (2π)`; the first is the
/// default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum W2LogPi {
    #[default]
    OverPi,
    OverTwoPi,
}

/// The tail weights at a given `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailWeights {
    pub t0: u64,
    pub w1: f64,
    pub w2: f64,
}

/// `w1(t0) = (c1 + 1/2π) Σ_{n≥t0} n⁻²` and
/// `w2(t0) = (c1 + 1/2π) Σ_{n≥t0} n⁻² log n + (2(c1 log 2 + c2) − log π/π) Σ_{n≥t0} n⁻²`.
pub fn tail_weights(t0: u64) -> Result<TailWeights> {
    tail_weights_with(t0, W2LogPi::OverPi)
}

/// [`tail_weights`] with an explicit choice of the `log π` constant.
pub fn tail_weights_with(t0: u64, variant: W2LogPi) -> Result<TailWeights> {
    if t0 < 1 {
        return Err(ZfrError::precondition("tail_weights", "t0 must be at least 1"));
    }
    let c = DensityConstants::PUBLISHED;
    let z = zeta2_tail(t0)?;
    let lz = log_zeta2_tail(t0)?;
    let lead = c.c1 + 1.0 / (2.0 * PI);
    let logpi = match variant {
        W2LogPi::OverPi => PI.ln() / PI,
        W2LogPi::OverTwoPi => PI.ln() / (2.0 * PI),
    };
    let w1 = lead * z;
    let w2 = lead * lz + (2.0 * (c.c1 * std::f64::consts::LN_2 + c.c2) - logpi) * z;
    Ok(TailWeights { t0, w1, w2 })
}

/// `s0(k, t0)`: bound for `η Σ` over zeros with `|γ − kγ0| ≥ t0`.
///
/// * `k = 0`: `2 w1/r + w2/(r log(q0 Y0))`;
/// * `k ≥ 1`: `w1 log(q0²(k Y0 + 1))/(r log(q0 Y0)) + w2/(r log(q0 Y0))`.
pub fn s0_weight(k: u32, t0: u64, r: f64, q0: f64, y0: f64) -> Result<f64> {
    s0_weight_from(k, &tail_weights(t0)?, r, q0, y0)
}

/// [`s0_weight`] from precomputed tail weights.
pub fn s0_weight_from(k: u32, tw: &TailWeights, r: f64, q0: f64, y0: f64) -> Result<f64> {
    let l = (q0 * y0).ln();
    if !(l > 0.0) {
        return Err(ZfrError::precondition("s0_weight", format!("log(q0*Y0) = {l} must be positive")));
    }
    if !(r > 0.0) {
        return Err(ZfrError::precondition("s0_weight", format!("r = {r} must be positive")));
    }
    Ok(if k == 0 {
        2.0 * tw.w1 / r + tw.w2 / (r * l)
    } else {
        tw.w1 * (q0 * q0 * (k as f64 * y0 + 1.0)).ln() / (r * l) + tw.w2 / (r * l)
    })
}
