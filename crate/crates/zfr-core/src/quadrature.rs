//! Adaptive one-dimensional quadrature on finite intervals.
//!
//! Two rules are available:
//!
//! * globally adaptive Gauss–Legendre: each panel is integrated with a
//!   10-point and a 20-point rule, the difference serves as the panel error
//!   estimate, and the panel with the largest estimate is bisected until the
//!   summed estimate falls below the tolerance;
//! * recursive adaptive Simpson with Richardson correction, kept as an
//!   independent cross-check.
//!
//! Integrands with kinks (for instance `|g(u)|`) must be split at the kinks
//! by the caller; both rules assume a smooth integrand on each sub-interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZfrError};

/// Quadrature rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMethod {
    AdaptiveGaussLegendre,
    AdaptiveSimpson,
}

/// Quadrature settings carried by every [`crate::test_function::ThetaFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub method: QuadratureMethod,
    /// Absolute error target for a whole integral.
    pub abs_tol: f64,
    /// Maximum number of panels (Gauss–Legendre) or recursion budget
    /// (Simpson) before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            method: QuadratureMethod::AdaptiveGaussLegendre,
            abs_tol: 1e-11,
            max_subdivisions: 4000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Below this relative level the error estimate is dominated by rounding,
/// so the tolerance is floored at `ROUNDING_FLOOR * |I|`.
const ROUNDING_FLOOR: f64 = 2e-14;

struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1], found
/// by Newton iteration on the three-term Legendre recurrence.
fn gauss_legendre_rule(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

fn rule(n: usize) -> &'static GaussRule {
    static G10: OnceLock<GaussRule> = OnceLock::new();
    static G20: OnceLock<GaussRule> = OnceLock::new();
    match n {
        10 => G10.get_or_init(|| gauss_legendre_rule(10)),
        20 => G20.get_or_init(|| gauss_legendre_rule(20)),
        _ => unreachable!("only the 10/20 pair is used"),
    }
}

fn apply_rule<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, r: &GaussRule) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    r.nodes
        .iter()
        .zip(&r.weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let coarse = apply_rule(f, a, b, rule(10));
    let fine = apply_rule(f, a, b, rule(20));
    Panel { a, b, value: fine, error: (fine - coarse).abs() }
}

fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let first = gl_panel(f, a, b);
    let (mut total, mut err) = (first.value, first.error);
    heap.push(first);
    let mut panels = 1;
    loop {
        if !total.is_finite() {
            return Err(ZfrError::numeric("quadrature", "non-finite integrand value"));
        }
        let target = cfg.abs_tol.max(ROUNDING_FLOOR * total.abs());
        if err <= target {
            return Ok(QuadResult { value: total, error_estimate: err, panels });
        }
        if panels >= cfg.max_subdivisions {
            return Err(ZfrError::numeric(
                "quadrature",
                format!(
                    "no convergence on [{a}, {b}] after {panels} panels: estimate {total:e}, error {err:e}, target {target:e}"
                ),
            ));
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gl_panel(f, worst.a, mid);
        let right = gl_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
        // Re-sum periodically so that cancellation in the running totals
        // cannot leave a stale, too-small error estimate.
        if panels % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    budget: &mut usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a) < 1e-14 {
        return Ok(left + right + delta / 15.0);
    }
    if *budget == 0 {
        return Err(ZfrError::numeric("quadrature", "adaptive Simpson budget exhausted"));
    }
    *budget -= 1;
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, budget)?
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, budget)?)
}

/// Integrate `f` over `[a, b]` with the configured adaptive rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(ZfrError::domain("quadrature", "interval endpoints must be finite"));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, panels: 0 });
    }
    if a > b {
        let r = integrate(f, b, a, cfg)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    match cfg.method {
        QuadratureMethod::AdaptiveGaussLegendre => adaptive_gauss_legendre(&f, a, b, cfg),
        QuadratureMethod::AdaptiveSimpson => {
            let (fa, fb) = (f(a), f(b));
            let fm = f(0.5 * (a + b));
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            let mut budget = cfg.max_subdivisions.saturating_mul(64);
            let start = budget;
            let value = simpson_rec(&f, a, b, fa, fm, fb, whole, cfg.abs_tol, &mut budget)?;
            Ok(QuadResult { value, error_estimate: cfg.abs_tol, panels: start - budget + 1 })
        }
    }
}

/// Integrate over consecutive sub-intervals `[p_i, p_{i+1}]` and sum, each
/// piece receiving an equal share of the tolerance.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], cfg: &QuadratureConfig) -> Result<QuadResult> {
    let pieces = breakpoints.len().saturating_sub(1).max(1);
    let piece_cfg = QuadratureConfig { abs_tol: cfg.abs_tol / pieces as f64, ..*cfg };
    let mut acc = QuadResult { value: 0.0, error_estimate: 0.0, panels: 0 };
    for w in breakpoints.windows(2) {
        let r = integrate(&f, w[0], w[1], &piece_cfg)?;
        acc.value += r.value;
        acc.error_estimate += r.error_estimate;
        acc.panels += r.panels;
    }
    Ok(acc)
}

/// Composite Simpson rule with `panels` (even) panels.  Used only as a brute
/// force oracle in tests and property checks.
pub fn composite_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = if panels % 2 == 0 { panels } else { panels + 1 };
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}
