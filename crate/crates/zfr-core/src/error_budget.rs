//! Explicit error terms and their per-case assembly into the cubic
//! `e(η) = α1 η + α2 η² + α3 η³`.
//!
//! Every sub-term is returned as an [`ErrorCubic`] whose nonzero
//! coefficients are exactly those of the corresponding displayed bound; the
//! η powers are applied symbolically, so evaluating at `η0` is the last step.
//!
//! The assembled cubic is the plain sum `𝔰 + 𝔭 + 𝔳 + 𝔴` of the sub-terms
//! with their displayed signs.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::cases::{CaseConfig, Family};
use crate::error::{Result, ZfrError};
use crate::special_functions::{delta_bound, digamma_real, DeltaRegime};
use crate::test_function::ThetaFunction;
use crate::trig_polynomials::P1_A;
use crate::zero_density::{s0_weight_from, tail_weights, TailWeights};

/// `p1 ≥ ∫_1^∞ U(T+4)/T² dT`, used verbatim.
pub const P1_CONST: f64 = 4.803;
/// The companion constant `p2`, used verbatim.
pub const P2_CONST: f64 = 1.292;
/// Slack allowed when checking `κ ≤ κ_q` and `δ ≥ δ_q`.
const PARAM_SLACK: f64 = 1e-12;

/// `e(η) = α1 η + α2 η² + α3 η³`; no constant term by construction.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorCubic {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl ErrorCubic {
    pub const ZERO: ErrorCubic = ErrorCubic { alpha1: 0.0, alpha2: 0.0, alpha3: 0.0 };

    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Self {
        ErrorCubic { alpha1, alpha2, alpha3 }
    }

    pub fn eval(&self, eta: f64) -> f64 {
        eta * (self.alpha1 + eta * (self.alpha2 + eta * self.alpha3))
    }

    /// `e(η) ≤ 0` at `n` equally spaced points of `(0, η0]`.
    pub fn nonpositive_on(&self, eta0: f64, n: usize) -> bool {
        (1..=n).all(|i| self.eval(eta0 * i as f64 / n as f64) <= 0.0)
    }
}

impl Add for ErrorCubic {
    type Output = ErrorCubic;
    fn add(self, o: ErrorCubic) -> ErrorCubic {
        ErrorCubic::new(self.alpha1 + o.alpha1, self.alpha2 + o.alpha2, self.alpha3 + o.alpha3)
    }
}

impl Mul<ErrorCubic> for f64 {
    type Output = ErrorCubic;
    fn mul(self, c: ErrorCubic) -> ErrorCubic {
        ErrorCubic::new(self * c.alpha1, self * c.alpha2, self * c.alpha3)
    }
}

impl std::iter::Sum for ErrorCubic {
    fn sum<I: Iterator<Item = ErrorCubic>>(iter: I) -> ErrorCubic {
        iter.fold(ErrorCubic::ZERO, Add::add)
    }
}

/// Divisor convention inside `𝔴3`/`𝔴4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WLogMode {
    /// `r log(q0 Y0)`, consistent with the definition of `η0`.
    #[default]
    Combined,
    /// `r log(q0)` exactly as printed.
    Strict,
}

/// All inputs of the error terms at one parameter point.
#[derive(Debug, Clone)]
pub struct BudgetInputs<'a> {
    pub tf: &'a ThetaFunction,
    pub sigma0: f64,
    pub eta0: f64,
    pub omega0: f64,
    pub kappa: f64,
    pub delta: f64,
    /// The Stechkin solution the hypotheses of the zero-sum bound refer to.
    pub kappa_q: f64,
    pub delta_q: f64,
    pub t0: u64,
    pub r: f64,
    pub big_r: f64,
    pub q0: f64,
    pub y0: f64,
    /// `α` of the Case III bounds (0 elsewhere).
    pub alpha: f64,
    /// `M(−r/R)`.
    pub kernel_m: f64,
    pub tails: TailWeights,
    pub w_log: WLogMode,
}

impl<'a> BudgetInputs<'a> {
    /// Assemble inputs, computing `M(−r/R)` and the tail weights.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        tf: &'a ThetaFunction,
        sigma0: f64,
        eta0: f64,
        kappa: f64,
        delta: f64,
        t0: u64,
        r: f64,
        big_r: f64,
        q0: f64,
        y0: f64,
        alpha: f64,
        w_log: WLogMode,
    ) -> Result<Self> {
        let kernel_m = tf.kernel_m(-r / big_r)?;
        let b = BudgetInputs {
            tf,
            sigma0,
            eta0,
            omega0: (1.0 - sigma0) / eta0,
            kappa,
            delta,
            kappa_q: kappa,
            delta_q: delta,
            t0,
            r,
            big_r,
            q0,
            y0,
            alpha,
            kernel_m,
            tails: tail_weights(t0)?,
            w_log,
        };
        b.validate()?;
        Ok(b)
    }

    /// Same inputs with a different `t0` (reuses `M(−r/R)`).
    pub fn with_t0(&self, t0: u64) -> Result<Self> {
        let mut b = self.clone();
        b.t0 = t0;
        b.tails = tail_weights(t0)?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        const OP: &str = "BudgetInputs";
        if !(self.eta0 > 0.0) {
            return Err(ZfrError::precondition(OP, format!("eta0 = {} must be positive", self.eta0)));
        }
        if !(2.0 * self.sigma0 - 1.0 > 0.0) {
            return Err(ZfrError::precondition(OP, format!("2 sigma0 - 1 = {} must be positive", 2.0 * self.sigma0 - 1.0)));
        }
        let kmax = self.sigma0 / (self.sigma0 + self.delta);
        if self.kappa > kmax {
            return Err(ZfrError::precondition(OP, format!("kappa = {} exceeds sigma0/(sigma0+delta) = {kmax}", self.kappa)));
        }
        Ok(())
    }

    fn h0(&self) -> f64 {
        self.tf.h0
    }

    fn m(&self) -> f64 {
        self.tf.m_theta
    }

    fn log_q0y0(&self) -> f64 {
        (self.q0 * self.y0).ln()
    }
}

/// `𝔰1`: η and η³ coefficients
/// `−[1−κ(1/δ + 1/(σ0−η0+δ))] h0` and `−[1−κ(1/δ³ + 1/(σ0−η0+δ)³)] m`.
pub fn s1_term(b: &BudgetInputs) -> ErrorCubic {
    let (k, d) = (b.kappa, b.delta);
    let x = b.sigma0 - b.eta0 + d;
    ErrorCubic::new(
        -(1.0 - k * (1.0 / d + 1.0 / x)) * b.h0(),
        0.0,
        -(1.0 - k * (d.powi(-3) + x.powi(-3))) * b.m(),
    )
}

/// `𝔰1′`: η coefficient `h0(−(σ0−½)/(1+α²η0²) + κ/(σ0−1+δ) + κ/(σ0−½+δ))`
/// and η³ coefficient `−m(1/(σ0−½) + κ/(σ0−1+δ)³ + κ/(σ0−½+δ)³)`.
pub fn s1_prime_term(b: &BudgetInputs) -> Result<ErrorCubic> {
    let d1 = b.tf.d1;
    if !(b.alpha >= 0.0 && b.alpha * d1 < PI) {
        return Err(ZfrError::precondition(
            "s1_prime_term",
            format!("need 0 <= alpha < pi/d1 = {}, got alpha = {}", PI / d1, b.alpha),
        ));
    }
    let (k, d, s) = (b.kappa, b.delta, b.sigma0);
    let a = s - 1.0 + d;
    let c = s - 0.5 + d;
    Ok(ErrorCubic::new(
        b.h0() * (-(s - 0.5) / (1.0 + b.alpha.powi(2) * b.eta0.powi(2)) + k / a + k / c),
        0.0,
        -b.m() * (1.0 / (s - 0.5) + k / a.powi(3) + k / c.powi(3)),
    ))
}

/// `𝔰2(k)`: η and η² coefficients `M(−r/R)𝔰0(k,t0)` and
/// `(1+2κ)m/(σ0−½)·𝔰0(k,t0)`.
pub fn s2_term(b: &BudgetInputs, k: u32) -> Result<ErrorCubic> {
    if b.kappa > b.kappa_q + PARAM_SLACK || b.delta < b.delta_q - PARAM_SLACK {
        return Err(ZfrError::precondition(
            "s2_term",
            format!("need kappa <= kappa_q and delta >= delta_q; got ({}, {}) vs ({}, {})", b.kappa, b.delta, b.kappa_q, b.delta_q),
        ));
    }
    let s0 = s0_weight_from(k, &b.tails, b.r, b.q0, b.y0)?;
    Ok(ErrorCubic::new(b.kernel_m * s0, (1.0 + 2.0 * b.kappa) * b.m() / (b.sigma0 - 0.5) * s0, 0.0))
}

/// `𝔭0`: η and η³ coefficients `−h0κ/δ` and `mκ/(σ0−1+δ)³`.
pub fn p0_term(b: &BudgetInputs) -> Result<ErrorCubic> {
    let a = b.sigma0 - 1.0 + b.delta;
    if !(a > 0.0) {
        return Err(ZfrError::domain("p0_term", format!("sigma0 - 1 + delta = {a} must be positive")));
    }
    Ok(ErrorCubic::new(-b.h0() * b.kappa / b.delta, 0.0, b.m() * b.kappa / a.powi(3)))
}

/// Smallest `α` for which the contribution at `σ − 1 + ikγ0` is dominated:
/// `(1/k)√(2rM(−r/R)/((1−κ)h0) − ω0²)`, or 0 when the radicand is negative.
pub fn alpha_threshold(b: &BudgetInputs, k: u32) -> Result<f64> {
    if k < 1 {
        return Err(ZfrError::precondition("alpha_threshold", "k must be at least 1"));
    }
    let rad = 2.0 * b.r * b.kernel_m / ((1.0 - b.kappa) * b.h0()) - b.omega0.powi(2);
    Ok(if rad > 0.0 { rad.sqrt() / k as f64 } else { 0.0 })
}

/// The five `𝔳` families; index `k ∈ 1..=4` for the indexed ones (entry 0 unused).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VTerms {
    pub v0: f64,
    pub v1: [f64; 5],
    pub v2: f64,
    pub v3: [f64; 5],
    pub v4: [f64; 5],
}

/// Evaluate `𝔳0 … 𝔳4` through the digamma function and the Δ bounds.
pub fn v_terms(b: &BudgetInputs) -> Result<VTerms> {
    let (k, d, s) = (b.kappa, b.delta, b.sigma0);
    let base = -(1.0 - k) / 2.0 * PI.ln();
    let v0 = base + digamma_real(1.5)? / 2.0 - k / 2.0 * digamma_real((s + d) / 2.0 + 1.0)?;
    let v2 = base + digamma_real(1.0)? / 2.0 - k / 2.0 * digamma_real((s + d) / 2.0)?;
    let mut v1 = [0.0; 5];
    let mut v3 = [0.0; 5];
    let mut v4 = [0.0; 5];
    for j in 1..=4usize {
        let kf = j as f64;
        v1[j] = base + delta_bound(DeltaRegime::SmallY, s + 2.0, 3.0, kf, k, d)? / 2.0;
        v3[j] = (1.0 - k) / 2.0 * (kf / (2.0 * PI)).ln() + delta_bound(DeltaRegime::LargeY, s, 2.0, kf * b.y0, k, d)? / 2.0;
        v4[j] = base + delta_bound(DeltaRegime::SmallY, s, 2.0, kf, k, d)? / 2.0;
    }
    Ok(VTerms { v0, v1, v2, v3, v4 })
}

/// `𝔴1(x) = m/x³` (η³).
pub fn w1_sub(m: f64, x: f64) -> f64 {
    m / x.powi(3)
}

/// `𝔴2(x) = m/(x Y0²)` (η³).
pub fn w2_sub(m: f64, x: f64, y0: f64) -> f64 {
    m / (x * y0 * y0)
}

/// `𝔴3(x) = p1 m/(r L π x)(1/x² + 1)` (η²).
pub fn w3_sub(m: f64, x: f64, r: f64, l: f64) -> f64 {
    P1_CONST * m / (r * l * PI * x) * (1.0 / (x * x) + 1.0)
}

/// `𝔴4(x) = p2 m/(r L π x)(1/x² + 1)` (η²).
pub fn w4_sub(m: f64, x: f64, r: f64, l: f64) -> f64 {
    P2_CONST * m / (r * l * PI * x) * (1.0 / (x * x) + 1.0)
}

/// The combined `𝔴` bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WTerms {
    pub w0: ErrorCubic,
    pub w5: ErrorCubic,
    pub w6: ErrorCubic,
}

/// `𝔴0 = (𝔴1+𝔴3)(σ0) + κ(𝔴1+𝔴3)(σ0+δ)`,
/// `𝔴5 = (½𝔴1+𝔴3)(σ0) + κ(½𝔴1+𝔴3)(σ0+δ)`,
/// `𝔴6 = (½𝔴2+𝔴4)(σ0) + κ(½𝔴2+𝔴4)(σ0+δ)`.
pub fn w_terms(b: &BudgetInputs) -> Result<WTerms> {
    let x0 = b.sigma0;
    let x1 = b.sigma0 + b.delta;
    if !(x0 > 0.0) {
        return Err(ZfrError::precondition("w_terms", format!("x = {x0} must be positive")));
    }
    let l = match b.w_log {
        WLogMode::Combined => b.log_q0y0(),
        WLogMode::Strict => b.q0.ln(),
    };
    let (m, k, r) = (b.m(), b.kappa, b.r);
    let pair = |f: &dyn Fn(f64) -> f64| f(x0) + k * f(x1);
    let w3 = pair(&|x| w3_sub(m, x, r, l));
    let w4 = pair(&|x| w4_sub(m, x, r, l));
    let w1 = pair(&|x| w1_sub(m, x));
    let w2 = pair(&|x| w2_sub(m, x, b.y0));
    Ok(WTerms {
        w0: ErrorCubic::new(0.0, w3, w1),
        w5: ErrorCubic::new(0.0, w3, 0.5 * w1),
        w6: ErrorCubic::new(0.0, w4, 0.5 * w2),
    })
}

/// The four groups of the assembled budget and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetBreakdown {
    pub s: ErrorCubic,
    pub p: ErrorCubic,
    pub v: ErrorCubic,
    pub w: ErrorCubic,
    pub total: ErrorCubic,
}

/// Assemble `e(η)` for the given case, returning the cubic.
pub fn assemble_cubic(case: &CaseConfig, b: &BudgetInputs) -> Result<ErrorCubic> {
    Ok(assemble_breakdown(case, b)?.total)
}

/// Assemble `e(η)` with its four groups.
pub fn assemble_breakdown(case: &CaseConfig, b: &BudgetInputs) -> Result<BudgetBreakdown> {
    let p0 = p0_term(b)?;
    let v = v_terms(b)?;
    let w = w_terms(b)?;
    let h0 = b.h0();
    let (s, p, vsum, wsum) = match case.family() {
        Family::I | Family::II => {
            let a = &case.trig.coefficients;
            if a.len() != 5 {
                return Err(ZfrError::Config(format!("{}: expected a degree-4 polynomial", case.case_id)));
            }
            let big_a: f64 = a[1..].iter().sum();
            debug_assert!((big_a - P1_A).abs() < 1e-9);
            let s = a[1] * s1_term(b) + (0..=4).map(|k| Ok(a[k] * s2_term(b, k as u32)?)).sum::<Result<ErrorCubic>>()?;
            let p = a[0] * p0;
            let (vsum, wsum) = match case.case_id {
                crate::cases::CaseId::IA | crate::cases::CaseId::IB => {
                    (a[0] * v.v0 + (1..=4).map(|k| a[k] * v.v3[k]).sum::<f64>(), a[0] * w.w0 + big_a * w.w6)
                }
                crate::cases::CaseId::IC => {
                    (a[0] * v.v0 + (1..=4).map(|k| a[k] * v.v4[k]).sum::<f64>(), a[0] * w.w0 + big_a * w.w5)
                }
                _ => {
                    let principal = &case.principal_k;
                    let is_p = |k: usize| principal.contains(&(k as u32));
                    let vs = a[0] * v.v0 + (1..=4).map(|k| a[k] * if is_p(k) { v.v1[k] } else { v.v4[k] }).sum::<f64>();
                    let ap: f64 = (1..=4).filter(|&k| is_p(k)).map(|k| a[k]).sum();
                    let rest: f64 = (1..=4).filter(|&k| !is_p(k)).map(|k| a[k]).sum();
                    (vs, (a[0] + ap) * w.w0 + rest * w.w5)
                }
            };
            (s, p, vsum, wsum)
        }
        Family::III | Family::IV => {
            let n = case.multiplicity as f64;
            let first = if case.family() == Family::III { s1_prime_term(b)? } else { s1_term(b) };
            let s = 2.0 * first + (n + 1.0) * s2_term(b, 0)?;
            (s, p0, v.v0 + n * v.v2, w.w0 + n * w.w5)
        }
    };
    let vc = ErrorCubic::new(vsum * h0, 0.0, 0.0);
    Ok(BudgetBreakdown { s, p, v: vc, w: wsum, total: s + p + vc + wsum })
}
