//! Stechkin parameters: the functions `κ2(δ)`, `κ3(δ)`, the solver for
//! `δ_q` (where they agree) and `κ_q`, and a direct check of Stechkin's
//! four-term inequality.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZfrError};

/// Bracket searched for `δ_q`.
pub const DELTA_BRACKET: (f64, f64) = (0.3, 1.0);
/// Bisection tolerance on `δ`.
pub const DELTA_TOL: f64 = 1e-12;

/// The solved Stechkin parameters together with their inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StechkinParams {
    pub delta_q: f64,
    pub kappa_q: f64,
    pub sigma0: f64,
    pub eta0: f64,
    pub h0: f64,
    pub m_theta: f64,
}

fn check(op: &'static str, delta: f64, sigma0: f64) -> Result<()> {
    if delta == 0.0 {
        return Err(ZfrError::domain(op, "delta = 0 is a singularity"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(ZfrError::precondition(op, format!("delta = {delta} outside (0, 1]")));
    }
    if !(2.0 * sigma0 - 1.0 > 0.0) {
        return Err(ZfrError::precondition(op, format!("2 sigma0 - 1 = {} must be positive", 2.0 * sigma0 - 1.0)));
    }
    Ok(())
}

fn numerator(sigma0: f64, eta0: f64, h0: f64, m: f64) -> f64 {
    let s = 2.0 * sigma0 - 1.0;
    h0 * s - m * eta0 * eta0 / s
}

/// `κ2(δ) = (h0(2σ0−1) − mη0²/(2σ0−1)) / ((2δ+1)h0 + (1/δ + 1/(2σ0−1+δ)) mη0²)`.
pub fn kappa2(delta: f64, sigma0: f64, eta0: f64, h0: f64, m: f64) -> Result<f64> {
    check("kappa2", delta, sigma0)?;
    let s = 2.0 * sigma0 - 1.0;
    let me2 = m * eta0 * eta0;
    Ok(numerator(sigma0, eta0, h0, m) / ((2.0 * delta + 1.0) * h0 + (1.0 / delta + 1.0 / (s + delta)) * me2))
}

/// `κ3(δ) = (h0(2σ0−1) − mη0²/(2σ0−1)) / ((1/δ + (1+δ)/(2σ0−1+δ)²) h0 + mη0² (1/δ³ + 1/(2σ0−1+δ)³))`.
pub fn kappa3(delta: f64, sigma0: f64, eta0: f64, h0: f64, m: f64) -> Result<f64> {
    check("kappa3", delta, sigma0)?;
    let s = 2.0 * sigma0 - 1.0;
    let me2 = m * eta0 * eta0;
    let den = (1.0 / delta + (1.0 + delta) / (s + delta).powi(2)) * h0 + me2 * (delta.powi(-3) + (s + delta).powi(-3));
    Ok(numerator(sigma0, eta0, h0, m) / den)
}

/// Solve `κ2(δ) = κ3(δ)` on [`DELTA_BRACKET`] by bisection.
pub fn solve_delta_kappa(sigma0: f64, eta0: f64, h0: f64, m_theta: f64) -> Result<StechkinParams> {
    const OP: &str = "solve_delta_kappa";
    if ![sigma0, eta0, h0, m_theta].iter().all(|v| v.is_finite()) {
        return Err(ZfrError::precondition(OP, "inputs must be finite"));
    }
    let g = |d: f64| -> Result<f64> { Ok(kappa2(d, sigma0, eta0, h0, m_theta)? - kappa3(d, sigma0, eta0, h0, m_theta)?) };
    let (mut a, mut b) = DELTA_BRACKET;
    let (ga, gb) = (g(a)?, g(b)?);
    if ga.signum() == gb.signum() {
        return Err(ZfrError::solver(
            OP,
            format!("no sign change of kappa2 - kappa3 on [{a}, {b}]: values {ga:e}, {gb:e}"),
        ));
    }
    let sa = ga.signum();
    while b - a > DELTA_TOL {
        let m = 0.5 * (a + b);
        let gm = g(m)?;
        if gm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if gm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let delta_q = 0.5 * (a + b);
    let kappa_q = kappa2(delta_q, sigma0, eta0, h0, m_theta)?;
    Ok(StechkinParams { delta_q, kappa_q, sigma0, eta0, h0, m_theta })
}

/// Which form of the four-term inequality to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StechkinForm {
    /// Shifted pair `(τ − β + iy)`, `(τ − 1 + β + iy)`, mirroring the
    /// unshifted pair; this is the form that holds.
    Symmetric,
    /// Both shifted denominators equal to `(τ − 1 + β + iy)`, as printed.
    AsPrinted,
}

/// Value of the four-term expression
/// `Re[1/(σ−β+iy) + 1/(σ−1+β+iy) − (1/√5)(1/(τ−β+iy) + 1/(τ−1+β+iy))]`
/// with `τ = (1 + √(1+4σ²))/2`.
pub fn stechkin_expression(beta: f64, y: f64, sigma: f64, form: StechkinForm) -> Result<f64> {
    const OP: &str = "stechkin_inequality_check";
    if !(0.5..=1.0).contains(&beta) || !(y > 0.0) || !(sigma > 1.0) {
        return Err(ZfrError::precondition(OP, format!("need beta in [1/2,1], y > 0, sigma > 1; got ({beta}, {y}, {sigma})")));
    }
    let tau = 0.5 * (1.0 + (1.0 + 4.0 * sigma * sigma).sqrt());
    let re_inv = |x: f64| x / (x * x + y * y);
    let base = re_inv(sigma - beta) + re_inv(sigma - 1.0 + beta);
    let shifted = match form {
        StechkinForm::Symmetric => re_inv(tau - beta) + re_inv(tau - 1.0 + beta),
        StechkinForm::AsPrinted => 2.0 * re_inv(tau - 1.0 + beta),
    };
    Ok(base - shifted / 5f64.sqrt())
}

/// Whether the symmetric four-term expression is `≥ −1e-12`.
pub fn stechkin_inequality_check(beta: f64, y: f64, sigma: f64) -> Result<bool> {
    Ok(stechkin_expression(beta, y, sigma, StechkinForm::Symmetric)? >= -1e-12)
}
