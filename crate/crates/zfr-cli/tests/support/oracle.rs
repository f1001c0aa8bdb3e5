//! Extended-precision re-evaluation of every closed-form error sub-term.
//!
//! Everything here is written from the formulas, not from the library code,
//! and evaluated in 320-bit binary floating point (about 96 decimal digits).
//! The digamma function uses its own recurrence-plus-asymptotic scheme with
//! Bernoulli numbers generated here; the `log n / n²` tail uses a
//! Euler–Maclaurin remainder with derivatives built by Leibniz' rule.
//!
//! Inputs that are not closed forms — the Stechkin pair `(κ, δ)` found by
//! bisection and the kernel value `M(−r/R)` found by quadrature — are taken
//! from the library as exact binary inputs.

#![allow(dead_code)]

use std::cell::RefCell;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

pub const P: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CC: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CC.with(|c| f(&mut c.borrow_mut()))
}

/// A 320-bit real.
#[derive(Clone, Debug)]
pub struct X(pub BigFloat);

impl X {
    pub fn f(v: f64) -> X {
        X(BigFloat::from_f64(v, P))
    }
    pub fn n(v: i64) -> X {
        X(BigFloat::from_i64(v, P))
    }
    /// Exact decimal literal (rounded once to 320 bits).
    pub fn dec(s: &str) -> X {
        with_cc(|cc| X(BigFloat::parse(s, Radix::Dec, P, RM, cc)))
    }
    pub fn pi() -> X {
        with_cc(|cc| X(cc.pi(P, RM)))
    }
    pub fn ln(&self) -> X {
        with_cc(|cc| X(self.0.ln(P, RM, cc)))
    }
    pub fn sin(&self) -> X {
        with_cc(|cc| X(self.0.sin(P, RM, cc)))
    }
    pub fn cos(&self) -> X {
        with_cc(|cc| X(self.0.cos(P, RM, cc)))
    }
    pub fn tan(&self) -> X {
        with_cc(|cc| X(self.0.tan(P, RM, cc)))
    }
    pub fn atan(&self) -> X {
        with_cc(|cc| X(self.0.atan(P, RM, cc)))
    }
    pub fn sqrt(&self) -> X {
        X(self.0.sqrt(P, RM))
    }
    pub fn powi(&self, n: usize) -> X {
        X(self.0.powi(n, P, RM))
    }
    pub fn recip(&self) -> X {
        X::n(1) / self.clone()
    }
    pub fn abs(&self) -> X {
        X(self.0.abs())
    }
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    pub fn lt(&self, o: &X) -> bool {
        self.0.cmp(&o.0).is_some_and(|c| c < 0)
    }
    pub fn min(&self, o: &X) -> X {
        if self.lt(o) {
            self.clone()
        } else {
            o.clone()
        }
    }
    /// Nearest `f64`, through a decimal rendering.
    pub fn to_f64(&self) -> f64 {
        let s = with_cc(|cc| self.0.format(Radix::Dec, RM, cc)).expect("format");
        s.parse().unwrap_or_else(|_| panic!("unparsable rendering {s}"))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for X {
            type Output = X;
            fn $m(self, o: X) -> X {
                X(self.0.$m(&o.0, P, RM))
            }
        }
        impl $tr<&X> for &X {
            type Output = X;
            fn $m(self, o: &X) -> X {
                X(self.0.$m(&o.0, P, RM))
            }
        }
        impl $tr<f64> for X {
            type Output = X;
            fn $m(self, o: f64) -> X {
                X(self.0.$m(&BigFloat::from_f64(o, P), P, RM))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for X {
    type Output = X;
    fn neg(self) -> X {
        X(self.0.neg())
    }
}

/// `|lib − exact| / |exact|` (or the absolute difference when `exact = 0`).
pub fn rel_error(lib: f64, exact: &X) -> f64 {
    let d = (X::f(lib) - exact.clone()).abs();
    if exact.is_zero() {
        d.to_f64()
    } else {
        (d / exact.abs()).to_f64()
    }
}

fn binom(n: usize, k: usize) -> X {
    let mut v = X::n(1);
    for i in 0..k {
        v = v * X::n((n - i) as i64) / X::n((i + 1) as i64);
    }
    v
}

/// Bernoulli numbers `B_0 … B_n` from `Σ_{j≤m} C(m+1, j) B_j = 0`.
pub fn bernoulli(n: usize) -> Vec<X> {
    let mut b = vec![X::n(1)];
    for m in 1..=n {
        let mut s = X::n(0);
        for (j, bj) in b.iter().enumerate() {
            s = s + binom(m + 1, j) * bj.clone();
        }
        b.push(-(s / X::n((m + 1) as i64)));
    }
    b
}

thread_local! {
    static BERN: Vec<X> = bernoulli(64);
}

fn factorial(n: usize) -> X {
    (1..=n).fold(X::n(1), |a, k| a * X::n(k as i64))
}

/// `ψ(x)` for real `x > 0`: shift to `x ≥ 40`, then the asymptotic series.
pub fn digamma(x: &X) -> X {
    let forty = X::n(40);
    let mut x = x.clone();
    let mut acc = X::n(0);
    while x.lt(&forty) {
        acc = acc - x.recip();
        x = x + X::n(1);
    }
    let mut s = x.ln() - (X::n(2) * x.clone()).recip();
    let x2 = x.clone() * x.clone();
    let mut xp = x2.clone();
    BERN.with(|b| {
        for k in 1..=30usize {
            s = s.clone() - b[2 * k].clone() / (X::n(2 * k as i64) * xp.clone());
            xp = xp.clone() * x2.clone();
        }
    });
    s + acc
}

/// `Σ_{n≥t0} 1/n² = π²/6 − Σ_{n<t0} 1/n²`.
pub fn zeta2_tail(t0: u64) -> X {
    let pi = X::pi();
    let mut s = pi.clone() * pi / X::n(6);
    for n in 1..t0 {
        s = s - X::n((n * n) as i64).recip();
    }
    s
}

/// `j`-th derivative of `log x / x²` at `x`.
fn dlog_over_sq(j: usize, x: &X) -> X {
    let lx = x.ln();
    let mut s = X::n(0);
    for i in 0..=j {
        let dlog = if i == 0 {
            lx.clone()
        } else {
            let v = factorial(i - 1) / x.powi(i);
            if (i - 1) % 2 == 1 {
                -v
            } else {
                v
            }
        };
        let l = j - i;
        let dpow = {
            let v = factorial(l + 1) / x.powi(l + 2);
            if l % 2 == 1 {
                -v
            } else {
                v
            }
        };
        s = s + binom(j, i) * dlog * dpow;
    }
    s
}

/// `Σ_{n≥t0} log n / n²`: direct summation to `N = t0 + 2000`, then
/// Euler–Maclaurin with eight Bernoulli corrections.
pub fn log_zeta2_tail(t0: u64) -> X {
    let cut = t0 + 2000;
    let mut s = X::n(0);
    for n in t0..cut {
        let nx = X::n(n as i64);
        s = s + nx.ln() / (nx.clone() * nx);
    }
    let nx = X::n(cut as i64);
    let ln = nx.ln();
    s = s + (ln.clone() + X::n(1)) / nx.clone() + ln / (X::n(2) * nx.clone() * nx.clone());
    BERN.with(|b| {
        for k in 1..=8usize {
            s = s.clone() - b[2 * k].clone() / factorial(2 * k) * dlog_over_sq(2 * k - 1, &nx);
        }
    });
    s
}

/// The constants of the zero-counting estimate, as exact decimals.
pub fn c1() -> X {
    X::dec("0.91845")
}
pub fn c2() -> X {
    X::dec("5.36927")
}

pub fn tail_weights(t0: u64) -> (X, X) {
    let pi = X::pi();
    let z = zeta2_tail(t0);
    let lz = log_zeta2_tail(t0);
    let lead = c1() + (X::n(2) * pi.clone()).recip();
    let w1 = lead.clone() * z.clone();
    let w2 = lead * lz + (X::n(2) * (c1() * X::n(2).ln() + c2()) - pi.ln() / pi) * z;
    (w1, w2)
}

/// One parameter set of the error budget.
#[derive(Clone, Debug)]
pub struct OracleInput {
    pub theta: f64,
    pub t0: u64,
    pub r: f64,
    pub big_r: f64,
    pub q0: f64,
    pub y0: f64,
    pub kappa: f64,
    pub delta: f64,
    pub alpha: f64,
    pub kernel_m: f64,
}

/// Named sub-terms; coefficient names carry the power of `η`.
pub type Terms = Vec<(String, X)>;

fn r1(x0: &X, x1: &X, y1: &X, k: &X, d: &X, l: u64) -> X {
    let one = X::n(1);
    let y2 = y1.clone() * y1.clone();
    let gamma = -digamma(&one);
    let mut s = -(gamma * (one.clone() - k.clone()))
        - X::n(2)
            * (x0.clone() / (x1.clone() * x1.clone() + y2.clone())
                - k.clone() * (x1.clone() + d.clone()) / ((x0.clone() + d.clone()).powi(2) + y2.clone()));
    for n in 1..=l {
        let nx = X::n(n as i64);
        let a = X::n(4) * nx.clone() + X::n(2) * x0.clone();
        let b = X::n(2) * nx.clone() + x1.clone();
        let c = a.clone() + X::n(2) * d.clone();
        let dd = b.clone() + d.clone();
        s = s + nx.recip() - a / (b.clone() * b + y2.clone())
            - k.clone() * (nx.recip() - c / (dd.clone() * dd + y2.clone()));
    }
    let lx = X::n(l as i64);
    s + lx.recip() + (X::n(4) * lx.clone() * lx.clone()).recip()
        - k.clone()
            * ((one + d.clone()) / lx.clone() + (X::n(17) + X::n(18) * d.clone()) / (X::n(8) * lx.clone() * lx))
}

fn r2(x1: &X, y1: &X, k: &X, d: &X) -> X {
    let one = X::n(1);
    (one.clone() - k.clone()) / X::n(2) * ((x1.clone() + d.clone()).powi(2) / (y1.clone() * y1.clone()) + one).ln()
        + (y1.clone() / x1.clone()).atan() / y1.clone()
        + k.clone() / y1.clone() * (y1.clone() / (x1.clone() + d.clone())).atan()
}

fn r3(x0: &X, x1: &X, y1: &X, k: &X, d: &X) -> X {
    (x0.recip() + k.clone() / (x0.clone() + d.clone())) / (X::n(3) * y1.clone())
        + (x1.clone() * x1.clone() + k.clone() * (x1.clone() + d.clone()).powi(2)) / (X::n(2) * y1.clone() * y1.clone())
}

/// Evaluate every sub-term at one parameter set.
pub fn subterms(inp: &OracleInput) -> Terms {
    let one = X::n(1);
    let two = X::n(2);
    let pi = X::pi();
    let th = X::f(inp.theta);
    let t = th.tan();
    let c = one.clone() + t.clone() * t.clone();
    let h0 = c.clone() * (X::n(3) - th.clone() * t.clone() - X::n(3) * th.clone() / t.clone());
    let m = (c.clone() * t.clone() * (c.clone() * th.clone() - t.clone())).abs();
    let d1 = -(two.clone() * th.clone() / t.clone());
    let (q0, y0, r, big_r) = (X::f(inp.q0), X::f(inp.y0), X::f(inp.r), X::f(inp.big_r));
    let lq = (q0.clone() * y0.clone()).ln();
    let eta0 = (r.clone() * lq.clone()).recip();
    let one_minus_sigma0 =
        (big_r.clone() * (q0.clone() * (X::n(4) * y0.clone() + X::n(inp.t0 as i64))).ln()).recip();
    let s0 = one.clone() - one_minus_sigma0.clone();
    let omega0 = one_minus_sigma0 / eta0.clone();
    let (k, d, alpha, mm) = (X::f(inp.kappa), X::f(inp.delta), X::f(inp.alpha), X::f(inp.kernel_m));
    let half = X::dec("0.5");

    let mut out: Terms = vec![
        ("h0".into(), h0.clone()),
        ("m".into(), m.clone()),
        ("d1".into(), d1.clone()),
        ("eta0".into(), eta0.clone()),
        ("sigma0".into(), s0.clone()),
        ("omega0".into(), omega0.clone()),
    ];

    // s1
    let x = s0.clone() - eta0.clone() + d.clone();
    out.push(("s1.eta".into(), -((one.clone() - k.clone() * (d.recip() + x.recip())) * h0.clone())));
    out.push((
        "s1.eta3".into(),
        -((one.clone() - k.clone() * (d.powi(3).recip() + x.powi(3).recip())) * m.clone()),
    ));
    // s1'
    let a = s0.clone() - one.clone() + d.clone();
    let cc = s0.clone() - half.clone() + d.clone();
    let sh = s0.clone() - half.clone();
    out.push((
        "s1p.eta".into(),
        h0.clone()
            * (-(sh.clone() / (one.clone() + alpha.clone() * alpha.clone() * eta0.clone() * eta0.clone()))
                + k.clone() / a.clone()
                + k.clone() / cc.clone()),
    ));
    out.push((
        "s1p.eta3".into(),
        -(m.clone() * (sh.recip() + k.clone() / a.powi(3) + k.clone() / cc.powi(3))),
    ));
    // tail weights and s2(k)
    let (w1, w2) = tail_weights(inp.t0);
    out.push(("w1".into(), w1.clone()));
    out.push(("w2".into(), w2.clone()));
    for kk in 0..=4u32 {
        let s0k = if kk == 0 {
            two.clone() * w1.clone() / r.clone() + w2.clone() / (r.clone() * lq.clone())
        } else {
            w1.clone() * (q0.clone() * q0.clone() * (X::n(kk as i64) * y0.clone() + one.clone())).ln() / (r.clone() * lq.clone())
                + w2.clone() / (r.clone() * lq.clone())
        };
        out.push((format!("s0[{kk}]"), s0k.clone()));
        out.push((format!("s2[{kk}].eta"), mm.clone() * s0k.clone()));
        out.push((
            format!("s2[{kk}].eta2"),
            (one.clone() + two.clone() * k.clone()) * m.clone() / sh.clone() * s0k,
        ));
    }
    // p0
    out.push(("p0.eta".into(), -(h0.clone() * k.clone() / d.clone())));
    out.push(("p0.eta3".into(), m.clone() * k.clone() / a.powi(3)));
    // alpha threshold
    for kk in 1..=4i64 {
        let rad = two.clone() * r.clone() * mm.clone() / ((one.clone() - k.clone()) * h0.clone()) - omega0.clone() * omega0.clone();
        let v = if rad.is_negative() { X::n(0) } else { rad.sqrt() / X::n(kk) };
        out.push((format!("alpha_threshold[{kk}]"), v));
    }
    // v terms
    let base = -((one.clone() - k.clone()) / two.clone() * pi.ln());
    out.push((
        "v0".into(),
        base.clone() + digamma(&X::dec("1.5")) / two.clone()
            - k.clone() / two.clone() * digamma(&((s0.clone() + d.clone()) / two.clone() + one.clone())),
    ));
    out.push((
        "v2".into(),
        base.clone() + digamma(&one) / two.clone() - k.clone() / two.clone() * digamma(&((s0.clone() + d.clone()) / two.clone())),
    ));
    for kk in 1..=4i64 {
        let kx = X::n(kk);
        out.push((
            format!("v1[{kk}]"),
            base.clone() + r1(&(s0.clone() + two.clone()), &X::n(3), &kx, &k, &d, 100) / two.clone(),
        ));
        let y1 = kx.clone() * y0.clone();
        let large = r2(&two, &y1, &k, &d).min(&r3(&s0, &two, &y1, &k, &d));
        out.push((
            format!("v3[{kk}]"),
            (one.clone() - k.clone()) / two.clone() * (kx.clone() / (two.clone() * pi.clone())).ln() + large / two.clone(),
        ));
        out.push((format!("v4[{kk}]"), base.clone() + r1(&s0, &two, &kx, &k, &d, 100) / two.clone()));
    }
    // w terms, for both readings of the log argument
    for (tag, l) in [("combined", lq.clone()), ("strict", q0.ln())] {
        let x0 = s0.clone();
        let x1 = s0.clone() + d.clone();
        let p1 = X::dec("4.803");
        let p2 = X::dec("1.292");
        let w1s = |x: &X| m.clone() / x.powi(3);
        let w2s = |x: &X| m.clone() / (x.clone() * y0.clone() * y0.clone());
        let w34 = |p: &X, x: &X| {
            p.clone() * m.clone() / (r.clone() * l.clone() * pi.clone() * x.clone()) * ((x.clone() * x.clone()).recip() + one.clone())
        };
        let pair = |f: &dyn Fn(&X) -> X| f(&x0) + k.clone() * f(&x1);
        let w1p = pair(&w1s);
        let w2p = pair(&w2s);
        let w3p = pair(&|x| w34(&p1, x));
        let w4p = pair(&|x| w34(&p2, x));
        out.push((format!("w0.eta2[{tag}]"), w3p.clone()));
        out.push((format!("w0.eta3[{tag}]"), w1p.clone()));
        out.push((format!("w5.eta2[{tag}]"), w3p));
        out.push((format!("w5.eta3[{tag}]"), w1p / two.clone()));
        out.push((format!("w6.eta2[{tag}]"), w4p));
        out.push((format!("w6.eta3[{tag}]"), w2p / two.clone()));
    }
    out
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn oracle_special_values() {
        // ψ(1) = −γ, ψ(1/2) = −γ − 2 log 2
        let g = X::dec("0.57721566490153286060651209008240243104215933593992359880576723488486772677766467");
        assert!(rel_error(-0.577_215_664_901_532_9, &digamma(&X::n(1))) < 1e-15);
        let d = digamma(&X::n(1)) + g.clone();
        assert!(d.abs().lt(&X::dec("1e-60")), "{:?}", d.to_f64());
        let half = digamma(&X::dec("0.5")) + g + X::n(2) * X::n(2).ln();
        assert!(half.abs().lt(&X::dec("1e-60")));
        // Σ_{n≥1} log n / n² = −ζ'(2) = 0.93754825431584375370...
        let lz = log_zeta2_tail(1) - X::dec("0.9375482543158437537025740945678649778978602886148299258854");
        assert!(lz.abs().lt(&X::dec("1e-40")), "{}", lz.to_f64());
    }
}
