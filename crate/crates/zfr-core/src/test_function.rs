//! The smoothed weight `h_θ`, its derivatives, its Laplace transform and the
//! kernel integrals derived from it.
//!
//! Everything is expressed in the η-free normalization (η = 1): the weight
//! actually used in the explicit formula is `f(t) = η h_θ(η t)`, and the
//! error-budget module applies the powers of η explicitly.
//!
//! With `T = tan θ` and `c = 1 + T²`, for `u ∈ [0, d1]`:
//!
//! ```text
//! h(u) = c [ c(−θ/T − u/2) cos(uT) − 2θ/T − u − sin(2θ+uT)/sin 2θ + 2(1 + sin(θ+uT)/sin θ) ]
//! d1   = −2θ/T,     h(0) = c (3 − θT − 3θ/T)
//! ```
//!
//! and `h = 0` outside the support.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZfrError};
use crate::quadrature::{integrate_pieces, QuadratureConfig};

/// Grid used to locate sign changes of `h''` before refining them.
const SIGN_SCAN_POINTS: usize = 400;
/// Bisection tolerance for the sign changes of `h''`.
const ROOT_TOL: f64 = 1e-10;

/// The weight `h_θ` together with its derived scalars.
///
/// Immutable once built; all evaluations are pure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaFunction {
    pub theta: f64,
    /// Right end of the support, `d1 = −2θ / tan θ`.
    pub d1: f64,
    /// `h_θ(0)`.
    pub h0: f64,
    /// `m_θ = |h''_θ(0)|`, which is also the maximum of `|h''_θ|`.
    pub m_theta: f64,
    pub quadrature: QuadratureConfig,
    tan: f64,
    c: f64,
    sin_theta: f64,
    sin_2theta: f64,
    /// Interior zeros of `h''`, sorted; they split the `|h''|` integrals.
    h2_roots: Vec<f64>,
}

/// Integrand selector for the main-term denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenominatorVariant {
    /// `∫ (a1 e^{−t} − a0) h(t) e^{ω0 t} dt`.
    CaseI,
    /// The same integrand with the exponential shift dropped (`ω0 = 0`).
    CaseII,
    /// `∫ (2 e^{−t} cos(α t) − 1) h(t) e^{ω0 t} dt`.
    CaseIIIIV,
}

impl ThetaFunction {
    /// Build `h_θ` for `θ ∈ (π/2, π)`.
    pub fn new(theta: f64, quadrature: QuadratureConfig) -> Result<Self> {
        if !(theta > FRAC_PI_2 && theta < PI) {
            return Err(ZfrError::domain("ThetaFunction::new", format!("theta = {theta} must lie in (pi/2, pi)")));
        }
        let tan = theta.tan();
        let c = 1.0 + tan * tan;
        let d1 = -2.0 * theta / tan;
        let h0 = c * (3.0 - theta * tan - 3.0 * theta / tan);
        let mut tf = ThetaFunction {
            theta,
            d1,
            h0,
            m_theta: 0.0,
            quadrature,
            tan,
            c,
            sin_theta: theta.sin(),
            sin_2theta: (2.0 * theta).sin(),
            h2_roots: Vec::new(),
        };
        tf.m_theta = tf.h2_raw(0.0).abs();
        tf.h2_roots = tf.locate_h2_roots();
        Ok(tf)
    }

    /// Build with the default quadrature settings.
    pub fn with_defaults(theta: f64) -> Result<Self> {
        Self::new(theta, QuadratureConfig::default())
    }

    /// Closed form of `h` without the support cut-off.
    fn h_raw(&self, u: f64) -> f64 {
        let (t, c, th) = (self.tan, self.c, self.theta);
        let ut = u * t;
        c * (c * (-th / t - 0.5 * u) * ut.cos() - 2.0 * th / t - u - (2.0 * th + ut).sin() / self.sin_2theta
            + 2.0 * (1.0 + (th + ut).sin() / self.sin_theta))
    }

    fn h1_raw(&self, u: f64) -> f64 {
        let (t, c, th) = (self.tan, self.c, self.theta);
        let ut = u * t;
        c * (c * (-0.5 * ut.cos() + (th + 0.5 * ut) * ut.sin()) - 1.0 - t * (2.0 * th + ut).cos() / self.sin_2theta
            + 2.0 * t * (th + ut).cos() / self.sin_theta)
    }

    fn h2_raw(&self, u: f64) -> f64 {
        let (t, c, th) = (self.tan, self.c, self.theta);
        let ut = u * t;
        let t2 = t * t;
        c * (c * (t * ut.sin() + t * (th + 0.5 * ut) * ut.cos()) + t2 * (2.0 * th + ut).sin() / self.sin_2theta
            - 2.0 * t2 * (th + ut).sin() / self.sin_theta)
    }

    fn in_support(&self, u: f64) -> bool {
        (0.0..=self.d1).contains(&u)
    }

    /// `h_θ(u)`, zero outside `[0, d1]`.
    pub fn h(&self, u: f64) -> f64 {
        if self.in_support(u) {
            self.h_raw(u)
        } else {
            0.0
        }
    }

    /// `h'_θ(u)` on the support (zero outside).
    pub fn h_prime(&self, u: f64) -> f64 {
        if self.in_support(u) {
            self.h1_raw(u)
        } else {
            0.0
        }
    }

    /// Analytic second derivative `h''_θ(u)`, defined on `[0, d1]`.
    pub fn h_second_derivative(&self, u: f64) -> Result<f64> {
        if !self.in_support(u) {
            return Err(ZfrError::domain(
                "h_second_derivative",
                format!("u = {u} outside the support [0, {}]", self.d1),
            ));
        }
        Ok(self.h2_raw(u))
    }

    /// Interior sign changes of `h''`.
    pub fn h2_sign_changes(&self) -> &[f64] {
        &self.h2_roots
    }

    fn locate_h2_roots(&self) -> Vec<f64> {
        let n = SIGN_SCAN_POINTS;
        let step = self.d1 / n as f64;
        let mut roots = Vec::new();
        // Stop one cell short of d1, where h'' vanishes by construction.
        let mut prev_u = step;
        let mut prev = self.h2_raw(prev_u);
        for i in 2..n {
            let u = step * i as f64;
            let v = self.h2_raw(u);
            if prev.signum() != v.signum() && prev != 0.0 && v != 0.0 {
                let (mut a, mut b, mut fa) = (prev_u, u, prev);
                while b - a > ROOT_TOL {
                    let m = 0.5 * (a + b);
                    let fm = self.h2_raw(m);
                    if fm.signum() == fa.signum() {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev_u = u;
            prev = v;
        }
        roots
    }

    fn support_breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(self.h2_roots.len() + 2);
        pts.push(0.0);
        pts.extend_from_slice(&self.h2_roots);
        pts.push(self.d1);
        pts
    }

    /// `F̃(X, Y) = ∫_0^{d1} h(t) e^{−Xt} cos(Yt) dt`.
    pub fn laplace_f_tilde(&self, x: f64, y: f64) -> Result<f64> {
        let pts = self.oscillation_breakpoints(y);
        Ok(integrate_pieces(|t| self.h_raw(t) * (-x * t).exp() * (y * t).cos(), &pts, &self.quadrature)?.value)
    }

    /// Breakpoints splitting the support into pieces with at most about one
    /// oscillation of `cos(Yt)` each.
    fn oscillation_breakpoints(&self, y: f64) -> Vec<f64> {
        let pieces = ((y.abs() * self.d1 / PI).ceil() as usize).max(1);
        (0..=pieces).map(|i| self.d1 * i as f64 / pieces as f64).collect()
    }

    /// Complex Laplace transform `∫_0^{d1} h(u) e^{−su} du`.
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        self.complex_transform(s, |u| self.h_raw(u))
    }

    /// Laplace transform of the second derivative, `∫_0^{d1} h''(u) e^{−su} du`.
    pub fn laplace_second_derivative(&self, s: Complex64) -> Result<Complex64> {
        self.complex_transform(s, |u| self.h2_raw(u))
    }

    fn complex_transform<G: Fn(f64) -> f64>(&self, s: Complex64, g: G) -> Result<Complex64> {
        let pts = self.oscillation_breakpoints(s.im);
        let re = integrate_pieces(|u| g(u) * (-s.re * u).exp() * (s.im * u).cos(), &pts, &self.quadrature)?.value;
        let im = integrate_pieces(|u| -g(u) * (-s.re * u).exp() * (s.im * u).sin(), &pts, &self.quadrature)?.value;
        Ok(Complex64::new(re, im))
    }

    /// `M(z) = ∫_0^{d1} |h''(u)| e^{−zu} du`, split at the sign changes of `h''`.
    pub fn kernel_m(&self, z: f64) -> Result<f64> {
        let pts = self.support_breakpoints();
        Ok(integrate_pieces(|u| self.h2_raw(u).abs() * (-z * u).exp(), &pts, &self.quadrature)?.value)
    }

    /// Main-term denominator for the `R0` formula of the selected variant.
    ///
    /// Returns [`ZfrError::Infeasible`] when the integral is not positive:
    /// the argument cannot produce a zero-free region at this point.
    pub fn r0_denominator(&self, a0: f64, a1: f64, omega0: f64, alpha: f64, variant: DenominatorVariant) -> Result<f64> {
        let v = match variant {
            DenominatorVariant::CaseI => self.denominator_integral(|t| a1 * (-t).exp() - a0, omega0)?,
            DenominatorVariant::CaseII => self.denominator_integral(|t| a1 * (-t).exp() - a0, 0.0)?,
            DenominatorVariant::CaseIIIIV => {
                self.denominator_integral(|t| 2.0 * (-t).exp() * (alpha * t).cos() - 1.0, omega0)?
            }
        };
        if !(v > 0.0) {
            return Err(ZfrError::infeasible(format!(
                "main-term denominator {v:e} is not positive (theta = {}, omega0 = {omega0}, alpha = {alpha})",
                self.theta
            )));
        }
        Ok(v)
    }

    fn denominator_integral<G: Fn(f64) -> f64>(&self, g: G, omega0: f64) -> Result<f64> {
        Ok(integrate_pieces(|t| g(t) * self.h_raw(t) * (omega0 * t).exp(), &[0.0, self.d1], &self.quadrature)?.value)
    }
}
