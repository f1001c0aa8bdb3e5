//! Nonnegative cosine polynomials and their certification.
//!
//! Four polynomials are used:
//!
//! | name | expansion                                   | factored form                  |
//! |------|---------------------------------------------|--------------------------------|
//! | P1   | Σ_{k≤4} a_k cos(ky)                         | 8(0.91 + cos y)²(0.265 + cos y)² |
//! | P2   | 2 + 3cos y + 2cos 2y + cos 3y               | 4cos²y (1 + cos y)             |
//! | P3   | 5 + 8cos y + 4cos 2y + cos 3y               | (1 + cos y)(1 + 2cos y)²       |
//! | P4   | 1 + cos y                                   | 1 + cos y                      |
//!
//! Nonnegativity is certified on a dense grid together with a
//! factored-form cross-check; since every factored form is a product of
//! squares and `1 + cos y`, agreement of the two forms is the real content.

use std::f64::consts::PI;

use serde::Serialize;

/// Coefficients of P1 (a0 … a4).
pub const P1_COEFFS: [f64; 5] = [10.916_926_58, 18.633_62, 11.4517, 4.7, 1.0];

/// A = a1 + a2 + a3 + a4 for P1.
pub const P1_A: f64 = 35.785_32;

/// Grid resolution used by [`certify_nonnegative`].
pub const CERT_GRID: usize = 100_000;
/// Allowed negativity on the grid.
pub const NONNEG_TOL: f64 = 1e-9;
/// Allowed mismatch between expanded and factored forms.
pub const FACTOR_TOL: f64 = 1e-8;

/// A product form: its description and an evaluator.
pub type FactoredForm = (&'static str, fn(f64) -> f64);

/// A cosine polynomial `Σ a_k cos(k y)`.
#[derive(Debug, Clone)]
pub struct CosinePolynomial {
    pub name: &'static str,
    pub coefficients: Vec<f64>,
    /// Product form and its textual description, when known.
    pub factored_form: Option<FactoredForm>,
}

impl CosinePolynomial {
    pub fn new(name: &'static str, coefficients: Vec<f64>) -> Self {
        CosinePolynomial { name, coefficients, factored_form: None }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// `Σ_{k≥1} a_k`.
    pub fn nonconstant_sum(&self) -> f64 {
        self.coefficients.iter().skip(1).sum()
    }

    pub fn p1() -> Self {
        CosinePolynomial {
            name: "P1",
            coefficients: P1_COEFFS.to_vec(),
            factored_form: Some(("8(0.91+cos y)^2(0.265+cos y)^2", |y| {
                let c = y.cos();
                8.0 * (0.91 + c).powi(2) * (0.265 + c).powi(2)
            })),
        }
    }

    pub fn p2() -> Self {
        CosinePolynomial {
            name: "P2",
            coefficients: vec![2.0, 3.0, 2.0, 1.0],
            factored_form: Some(("4cos^2 y(1+cos y)", |y| {
                let c = y.cos();
                4.0 * c * c * (1.0 + c)
            })),
        }
    }

    pub fn p3() -> Self {
        CosinePolynomial {
            name: "P3",
            coefficients: vec![5.0, 8.0, 4.0, 1.0],
            factored_form: Some(("(1+cos y)(1+2cos y)^2", |y| {
                let c = y.cos();
                (1.0 + c) * (1.0 + 2.0 * c).powi(2)
            })),
        }
    }

    pub fn p4() -> Self {
        CosinePolynomial {
            name: "P4",
            coefficients: vec![1.0, 1.0],
            factored_form: Some(("1+cos y", |y| 1.0 + y.cos())),
        }
    }

    /// All four polynomials in order.
    pub fn all() -> [CosinePolynomial; 4] {
        [Self::p1(), Self::p2(), Self::p3(), Self::p4()]
    }
}

/// `Σ a_k cos(k y)`.
pub fn evaluate(p: &CosinePolynomial, y: f64) -> f64 {
    p.coefficients.iter().enumerate().map(|(k, a)| a * (k as f64 * y).cos()).sum()
}

/// Outcome of [`certify_nonnegative`].
#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub name: &'static str,
    pub passed: bool,
    pub grid_min: f64,
    pub argmin: f64,
    /// Largest |expansion − factored form| on the grid (0 if no factored form).
    pub factor_mismatch: f64,
    /// A grid point where nonnegativity or factor agreement fails, if any.
    pub witness: Option<f64>,
}

/// Certify `p ≥ 0` on a [`CERT_GRID`]-point grid over `[0, 2π]`, and check
/// agreement with the factored form when one is known.
pub fn certify_nonnegative(p: &CosinePolynomial) -> CertificationReport {
    let mut grid_min = f64::INFINITY;
    let mut argmin = 0.0;
    let mut mismatch: f64 = 0.0;
    let mut witness = None;
    for i in 0..=CERT_GRID {
        let y = 2.0 * PI * i as f64 / CERT_GRID as f64;
        let v = evaluate(p, y);
        if v < grid_min {
            grid_min = v;
            argmin = y;
        }
        if let Some((_, f)) = p.factored_form {
            let d = (v - f(y)).abs();
            mismatch = mismatch.max(d);
            if d > FACTOR_TOL && witness.is_none() {
                witness = Some(y);
            }
        }
        if v < -NONNEG_TOL && witness.is_none() {
            witness = Some(y);
        }
    }
    CertificationReport {
        name: p.name,
        passed: witness.is_none(),
        grid_min,
        argmin,
        factor_mismatch: mismatch,
        witness,
    }
}

/// Expand `Π (r_i + cos y)^{e_i}` times `scale` into cosine coefficients by
/// multiplying polynomials in `c = cos y` and converting powers of `c` to
/// Chebyshev form.  Used to confirm the published coefficients.
pub fn expand_factored(scale: f64, roots: &[(f64, u32)]) -> Vec<f64> {
    let mut poly = vec![scale];
    for &(r, e) in roots {
        for _ in 0..e {
            let mut next = vec![0.0; poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i] += a * r;
                next[i + 1] += a;
            }
            poly = next;
        }
    }
    power_to_cosine(&poly)
}

/// Convert `Σ p_j c^j` with `c = cos y` into `Σ a_k cos(ky)`.
fn power_to_cosine(power: &[f64]) -> Vec<f64> {
    // c^j = 2^{1−j} Σ_{i ≤ j/2} binom(j, i) cos((j − 2i) y), halving the k = 0 term.
    let n = power.len();
    let mut out = vec![0.0; n];
    for (j, &pj) in power.iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        let scale = if j == 0 { 1.0 } else { 2f64.powi(1 - j as i32) };
        let mut binom = 1.0;
        for i in 0..=j / 2 {
            let k = j - 2 * i;
            let w = if k == 0 { 0.5 } else { 1.0 };
            out[k] += pj * scale * binom * if j == 0 { 1.0 } else { w };
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }
    out
}
