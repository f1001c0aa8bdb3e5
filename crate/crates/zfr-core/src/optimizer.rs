//! Derived parameters, the main-term constant `R0`, and the iterative search
//! over `(θ, t0, r, R)`.
//!
//! One outer step, given the previous constant `R`:
//!
//! 1. for each `θ` on a grid, find the largest `r` with `r < R0(r) ≤ r + 10⁻³`,
//!    where `R0(r)` is evaluated at the smallest `t0` making `e(η0)` negative;
//! 2. keep the `θ` minimizing `R0` (coarse grid at 10⁻², then 10⁻³ around
//!    the best coarse point);
//! 3. replace `R` by that `R0`.
//!
//! Steps repeat until successive constants agree to 10⁻³ or the case's step
//! budget is exhausted.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::{AlphaSource, CaseConfig, CaseId};
use crate::error::{Result, ZfrError};
use crate::error_budget::{alpha_threshold, assemble_cubic, BudgetInputs, ErrorCubic, WLogMode};
use crate::quadrature::QuadratureConfig;
use crate::stechkin::solve_delta_kappa;
use crate::test_function::ThetaFunction;

/// The starting constant of the outer iteration.
pub const INITIAL_R: f64 = 9.645_908_801;
/// Precision of the fixed-point condition `r < R0 ≤ r + FIXED_POINT_TOL`.
pub const FIXED_POINT_TOL: f64 = 1e-3;
/// Hard cap on outer steps.
pub const MAX_OUTER_STEPS: usize = 20;

/// Knobs of the search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub quadrature: QuadratureConfig,
    pub w_log: WLogMode,
    /// Largest `t0` tried before declaring a point infeasible.
    pub t0_max: u64,
    /// Margin kept from `π/2` and `π` by the `θ` grid.
    pub theta_margin: f64,
    pub coarse_step: f64,
    pub fine_step: f64,
    /// Cap on outer steps; the case's own step budget applies first.
    pub max_outer_steps: usize,
    /// Fix `θ` instead of searching for it.
    #[serde(default)]
    pub theta_pin: Option<f64>,
    /// Starting `R` of the outer iteration (default [`INITIAL_R`]).
    #[serde(default)]
    pub initial_r: Option<f64>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            quadrature: QuadratureConfig::default(),
            w_log: WLogMode::Combined,
            t0_max: 5000,
            theta_margin: 0.02,
            coarse_step: 1e-2,
            fine_step: 1e-3,
            max_outer_steps: MAX_OUTER_STEPS,
            theta_pin: None,
            initial_r: None,
        }
    }
}

/// A candidate point with all derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub theta: f64,
    pub t0: u64,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub kappa: f64,
    pub delta: f64,
    pub eta0: f64,
    pub sigma0: f64,
    pub omega0: f64,
    /// `α` used by the case (threshold for Case II, fixed for Case III, else 0).
    pub alpha: f64,
}

/// One outer step of the iteration, i.e. one table row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub step: usize,
    pub point: ParameterPoint,
    pub e_eta0: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    /// `r < R0 ≤ r + 10⁻³`.
    pub converged: bool,
}

/// The derived scalars `(η0, σ0, ω0)`.
pub fn derived_scalars(case: &CaseConfig, t0: u64, r: f64, big_r: f64) -> (f64, f64, f64) {
    let eta0 = 1.0 / (r * (case.q0 * case.y0).ln());
    let one_minus_sigma = 1.0 / (big_r * (case.q0 * (4.0 * case.y0 + t0 as f64)).ln());
    (eta0, 1.0 - one_minus_sigma, one_minus_sigma / eta0)
}

fn check_point_inputs(theta: f64, t0: u64, r: f64, big_r: f64) -> Result<()> {
    if !(theta > FRAC_PI_2 && theta < PI) {
        return Err(ZfrError::precondition("derive_point", format!("theta = {theta} outside (pi/2, pi)")));
    }
    if t0 < 1 {
        return Err(ZfrError::precondition("derive_point", "t0 must be at least 1"));
    }
    if !(r > 0.0 && r <= big_r) {
        return Err(ZfrError::precondition("derive_point", format!("need 0 < r <= R, got r = {r}, R = {big_r}")));
    }
    Ok(())
}

/// Derive `(η0, σ0, ω0)`, the Stechkin pair and `α` at `(θ, t0, r, R)`.
pub fn derive_point(case: &CaseConfig, tf: &ThetaFunction, t0: u64, r: f64, big_r: f64) -> Result<ParameterPoint> {
    check_point_inputs(tf.theta, t0, r, big_r)?;
    let (eta0, sigma0, omega0) = derived_scalars(case, t0, r, big_r);
    let sp = solve_delta_kappa(sigma0, eta0, tf.h0, tf.m_theta)?;
    let mut point = ParameterPoint {
        theta: tf.theta,
        t0,
        r,
        big_r,
        kappa: sp.kappa_q,
        delta: sp.delta_q,
        eta0,
        sigma0,
        omega0,
        alpha: case.table_alpha(),
    };
    if case.alpha_source == AlphaSource::ThresholdK {
        let b = budget_inputs(case, tf, &point, WLogMode::Combined)?;
        point.alpha = alpha_threshold(&b, case.principal_k[0])?;
    }
    Ok(point)
}

/// Budget inputs at a derived point.
pub fn budget_inputs<'a>(case: &CaseConfig, tf: &'a ThetaFunction, p: &ParameterPoint, w_log: WLogMode) -> Result<BudgetInputs<'a>> {
    let alpha = case.table_alpha();
    BudgetInputs::new(tf, p.sigma0, p.eta0, p.kappa, p.delta, p.t0, p.r, p.big_r, case.q0, case.y0, alpha, w_log)
}

/// `e(η)` at a derived point.
pub fn error_cubic_at(case: &CaseConfig, tf: &ThetaFunction, p: &ParameterPoint, w_log: WLogMode) -> Result<ErrorCubic> {
    assemble_cubic(case, &budget_inputs(case, tf, p, w_log)?)
}

/// `R0 = main_coeff (1−κ) h0 / (2 · denominator)`.
pub fn compute_r0(case: &CaseConfig, tf: &ThetaFunction, p: &ParameterPoint) -> Result<f64> {
    let (a0, a1) = case.denominator_coeffs();
    let den = tf.r0_denominator(a0, a1, p.omega0, case.table_alpha(), case.denominator_variant)?;
    Ok(case.main_coeff * (1.0 - p.kappa) * tf.h0 / (2.0 * den))
}

/// Evaluates `e(η0)` as a function of `t0` at fixed `(θ, r, R)`, sharing `M(−r/R)`.
struct T0Probe<'a> {
    case: &'a CaseConfig,
    tf: &'a ThetaFunction,
    r: f64,
    big_r: f64,
    w_log: WLogMode,
    kernel_m: f64,
}

impl<'a> T0Probe<'a> {
    fn new(case: &'a CaseConfig, tf: &'a ThetaFunction, r: f64, big_r: f64, w_log: WLogMode) -> Result<Self> {
        check_point_inputs(tf.theta, 1, r, big_r)?;
        Ok(T0Probe { case, tf, r, big_r, w_log, kernel_m: tf.kernel_m(-r / big_r)? })
    }

    fn point(&self, t0: u64) -> Result<ParameterPoint> {
        let (eta0, sigma0, omega0) = derived_scalars(self.case, t0, self.r, self.big_r);
        let sp = solve_delta_kappa(sigma0, eta0, self.tf.h0, self.tf.m_theta)?;
        Ok(ParameterPoint {
            theta: self.tf.theta,
            t0,
            r: self.r,
            big_r: self.big_r,
            kappa: sp.kappa_q,
            delta: sp.delta_q,
            eta0,
            sigma0,
            omega0,
            alpha: self.case.table_alpha(),
        })
    }

    fn e_eta0(&self, t0: u64) -> Result<(f64, ParameterPoint)> {
        let p = self.point(t0)?;
        let b = BudgetInputs {
            tf: self.tf,
            sigma0: p.sigma0,
            eta0: p.eta0,
            omega0: p.omega0,
            kappa: p.kappa,
            delta: p.delta,
            kappa_q: p.kappa,
            delta_q: p.delta,
            t0,
            r: self.r,
            big_r: self.big_r,
            q0: self.case.q0,
            y0: self.case.y0,
            alpha: p.alpha,
            kernel_m: self.kernel_m,
            tails: crate::zero_density::tail_weights(t0)?,
            w_log: self.w_log,
        };
        b.validate()?;
        Ok((assemble_cubic(self.case, &b)?.eval(p.eta0), p))
    }
}

/// Smallest `t0 ≥ 1` with `e(η0) < 0`, by doubling then bisection.
pub fn minimal_t0(case: &CaseConfig, tf: &ThetaFunction, r: f64, big_r: f64, cfg: &OptimizerConfig) -> Result<u64> {
    let probe = T0Probe::new(case, tf, r, big_r, cfg.w_log)?;
    minimal_t0_with(&probe, cfg.t0_max)
}

fn minimal_t0_with(probe: &T0Probe, t0_max: u64) -> Result<u64> {
    let neg = |t0: u64| -> Result<bool> { Ok(probe.e_eta0(t0)?.0 < 0.0) };
    if neg(1)? {
        return Ok(1);
    }
    let (mut lo, mut hi) = (1u64, 2u64);
    loop {
        if neg(hi)? {
            break;
        }
        if hi >= t0_max {
            return Err(ZfrError::infeasible(format!(
                "{}: e(eta0) stays nonnegative up to t0 = {t0_max} (theta = {}, r = {}, R = {})",
                probe.case.case_id, probe.tf.theta, probe.r, probe.big_r
            )));
        }
        lo = hi;
        hi = (hi * 2).min(t0_max);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if neg(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// A fully evaluated candidate at `(θ, r, R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub point: ParameterPoint,
    pub e_eta0: f64,
    pub r0: f64,
}

/// Evaluate `t0`, the derived point and `R0` at `(θ, r, R)`.
pub fn evaluate_at(case: &CaseConfig, tf: &ThetaFunction, r: f64, big_r: f64, cfg: &OptimizerConfig) -> Result<Evaluation> {
    let probe = T0Probe::new(case, tf, r, big_r, cfg.w_log)?;
    let t0 = minimal_t0_with(&probe, cfg.t0_max)?;
    let (e_eta0, mut point) = probe.e_eta0(t0)?;
    if case.alpha_source == AlphaSource::ThresholdK {
        point = derive_point(case, tf, t0, r, big_r)?;
    }
    Ok(Evaluation { point, e_eta0, r0: compute_r0(case, tf, &point)? })
}

/// Evaluate at a fully pinned `(θ, t0, r, R)` without searching `t0`.
pub fn evaluate_pinned(case: &CaseConfig, tf: &ThetaFunction, t0: u64, r: f64, big_r: f64, cfg: &OptimizerConfig) -> Result<Evaluation> {
    let point = derive_point(case, tf, t0, r, big_r)?;
    let e = error_cubic_at(case, tf, &point, cfg.w_log)?.eval(point.eta0);
    Ok(Evaluation { point, e_eta0: e, r0: compute_r0(case, tf, &point)? })
}

/// Case II: the threshold `α` must not exceed the boundary handled by the
/// matching small-height case, or some zeros would be covered by neither.
pub fn check_coverage(case: &CaseConfig, ev: &Evaluation) -> Result<()> {
    match case.coverage_alpha {
        Some(cover) if ev.point.alpha > cover => Err(ZfrError::infeasible(format!(
            "{}: alpha threshold {:.4} exceeds the boundary {cover} covered by the small-height case",
            case.case_id, ev.point.alpha
        ))),
        _ => Ok(()),
    }
}

/// Round `r` down to the 10⁻³ grid.
fn snap(r: f64) -> f64 {
    (r * 1000.0 + 1e-9).floor() / 1000.0
}

/// Find the largest `r` on the 10⁻³ grid in `[r_lower, R]` with
/// `r < R0(r) ≤ r + 10⁻³`.
///
/// The continuous root of `R0(r) − r` is located by damped fixed-point
/// iteration, falling back to bisection, then snapped to the grid and
/// adjusted by single grid steps until the acceptance window holds.
pub fn solve_r(case: &CaseConfig, tf: &ThetaFunction, big_r: f64, cfg: &OptimizerConfig) -> Result<Evaluation> {
    let lo_b = case.r_lower.min(big_r);
    let g = |r: f64| -> Result<Evaluation> { evaluate_at(case, tf, r, big_r, cfg) };
    let ev = snap_to_window(case, lo_b, big_r, &g)?;
    check_coverage(case, &ev)?;
    Ok(ev)
}

fn snap_to_window<G: Fn(f64) -> Result<Evaluation>>(case: &CaseConfig, lo_b: f64, big_r: f64, g: &G) -> Result<Evaluation> {
    let root = continuous_root(case, lo_b, big_r, g)?;
    let mut r = snap(root).clamp(lo_b, big_r);
    let mut ev = g(r)?;
    // Jumps of the minimal t0 can make R0(r) − r skip the window; keep the
    // largest r with a positive gap as the fallback.
    let mut fallback: Option<Evaluation> = None;
    for _ in 0..50 {
        let gap = ev.r0 - r;
        if gap > 0.0 && gap <= FIXED_POINT_TOL + 1e-12 {
            return Ok(ev);
        }
        if gap > 0.0 && fallback.map_or(true, |f| f.point.r < r) {
            fallback = Some(ev);
        }
        let next = if gap > FIXED_POINT_TOL { r + 1e-3 } else { r - 1e-3 };
        if next < lo_b - 1e-12 || next > big_r + 1e-12 {
            break;
        }
        if gap > FIXED_POINT_TOL && fallback.is_some_and(|f| f.point.r < r) {
            break;
        }
        r = snap(next + 1e-7);
        if fallback.is_some_and(|f| (f.point.r - r).abs() < 1e-9) {
            break;
        }
        ev = g(r)?;
    }
    Ok(fallback.unwrap_or(ev))
}

fn continuous_root<G: Fn(f64) -> Result<Evaluation>>(case: &CaseConfig, lo: f64, hi: f64, g: &G) -> Result<f64> {
    // Damped fixed-point iteration from the top of the bracket.
    let mut r = hi;
    for _ in 0..40 {
        let ev = g(r)?;
        let next = (r + 0.5 * (ev.r0 - r)).clamp(lo, hi);
        if (next - r).abs() < 1e-7 {
            return Ok(next);
        }
        r = next;
    }
    // Bisection on R0(r) − r.
    let f_lo = g(lo)?.r0 - lo;
    let f_hi = g(hi)?.r0 - hi;
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(ZfrError::solver(
            "solve_r",
            format!(
                "{}: no fixed point of R0(r) = r in [{lo}, {hi}]; R0 - r = {f_lo:.6} at r = {lo}, {f_hi:.6} at r = {hi}",
                case.case_id
            ),
        ));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > 1e-7 {
        let m = 0.5 * (a + b);
        if g(m)?.r0 - m > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Best fixed point over a `θ` grid, evaluated in parallel.
fn best_over(case: &CaseConfig, thetas: &[f64], big_r: f64, cfg: &OptimizerConfig) -> Option<Evaluation> {
    let evals: Vec<Option<Evaluation>> = thetas
        .par_iter()
        .map(|&th| {
            let tf = ThetaFunction::new(th, cfg.quadrature).ok()?;
            solve_r(case, &tf, big_r, cfg).ok().filter(|e| e.r0 > e.point.r)
        })
        .collect();
    // Points whose fixed-point gap lies in the acceptance window rank ahead of
    // fallbacks; within each class the smaller R0 wins.  Sequential reduction
    // in grid order keeps ties deterministic.
    let rank = |e: &Evaluation| (!in_window(e), e.r0);
    evals.into_iter().flatten().fold(None, |best: Option<Evaluation>, e| match best {
        Some(b) if rank(&b) <= rank(&e) => Some(b),
        _ => Some(e),
    })
}

/// Whether `r < R0 ≤ r + 10⁻³`.
pub fn in_window(e: &Evaluation) -> bool {
    e.r0 > e.point.r && e.r0 - e.point.r <= FIXED_POINT_TOL + 1e-12
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| ((lo + i as f64 * step) * 1e6).round() / 1e6).filter(|&t| t <= hi).collect()
}

/// One outer step at the given `R`: coarse then fine `θ` search.
pub fn optimize_step(case: &CaseConfig, big_r: f64, cfg: &OptimizerConfig) -> Result<Evaluation> {
    if let Some(th) = cfg.theta_pin {
        return solve_r(case, &ThetaFunction::new(th, cfg.quadrature)?, big_r, cfg);
    }
    let (lo, hi) = (FRAC_PI_2 + cfg.theta_margin, PI - cfg.theta_margin);
    let coarse = grid((lo / cfg.coarse_step).ceil() * cfg.coarse_step, hi, cfg.coarse_step);
    let best = best_over(case, &coarse, big_r, cfg).ok_or_else(|| {
        ZfrError::infeasible(format!("{}: no feasible theta on the coarse grid at R = {big_r}", case.case_id))
    })?;
    let c = best.point.theta;
    let fine = grid((c - cfg.coarse_step).max(lo), (c + cfg.coarse_step).min(hi), cfg.fine_step);
    Ok(best_over(case, &fine, big_r, cfg).map_or(best, |f| {
        if (!in_window(&f), f.r0) <= (!in_window(&best), best.r0) {
            f
        } else {
            best
        }
    }))
}

/// Run the outer iteration for one case, one result per outer step.
pub fn optimize_case(case: &CaseConfig, cfg: &OptimizerConfig) -> Result<Vec<CaseResult>> {
    let steps = case.max_outer_steps.min(cfg.max_outer_steps).max(1);
    let mut big_r = cfg.initial_r.unwrap_or(INITIAL_R);
    let mut out = Vec::with_capacity(steps);
    for step in 1..=steps {
        let ev = optimize_step(case, big_r, cfg)?;
        let converged = in_window(&ev);
        out.push(CaseResult { step, point: ev.point, e_eta0: ev.e_eta0, r0: ev.r0, converged });
        let done = (ev.r0 - big_r).abs() <= FIXED_POINT_TOL;
        big_r = ev.r0;
        if done {
            break;
        }
    }
    Ok(out)
}

/// Convenience: run all steps for a case id with default settings.
pub fn optimize(case: CaseId, cfg: &OptimizerConfig) -> Result<Vec<CaseResult>> {
    optimize_case(&case.config(), cfg)
}
