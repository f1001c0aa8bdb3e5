//! Randomised properties of the core building blocks.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use zfr_core::optimizer::derived_scalars;
use zfr_core::stechkin::{kappa2, kappa3, solve_delta_kappa, stechkin_inequality_check};
use zfr_core::trig_polynomials::{evaluate, CosinePolynomial};
use zfr_core::{CaseId, ErrorCubic, ThetaFunction};

fn theta() -> impl Strategy<Value = f64> {
    (FRAC_PI_2 + 0.02)..(PI - 0.02)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cubic_is_linear(a in prop::array::uniform3(-1e3..1e3f64), b in prop::array::uniform3(-1e3..1e3f64), eta in 0.0..0.2f64) {
        let (p, q) = (ErrorCubic::new(a[0], a[1], a[2]), ErrorCubic::new(b[0], b[1], b[2]));
        let lhs = (p + q).eval(eta);
        let rhs = p.eval(eta) + q.eval(eta);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        prop_assert_eq!(p.eval(0.0), 0.0);
    }

    #[test]
    fn boundary_conditions_hold(th in theta()) {
        let tf = ThetaFunction::with_defaults(th).unwrap();
        let scale = tf.h0.abs().max(1.0);
        prop_assert!(tf.d1 > 0.0);
        prop_assert!(tf.h(tf.d1).abs() <= 1e-9 * scale);
        prop_assert!(tf.h_prime(0.0).abs() <= 1e-9 * scale);
        prop_assert!(tf.h_prime(tf.d1).abs() <= 1e-9 * scale);
        prop_assert!(tf.h0 > 0.0);
        // h is nonnegative and maximal at the origin on its support.
        for i in 0..=50 {
            let u = tf.d1 * i as f64 / 50.0;
            prop_assert!(tf.h(u) >= -1e-9 * scale);
            prop_assert!(tf.h(u) <= tf.h0 * (1.0 + 1e-12));
        }
        prop_assert_eq!(tf.h(-0.1), 0.0);
        prop_assert_eq!(tf.h(tf.d1 + 0.1), 0.0);
    }

    #[test]
    fn trig_polynomials_are_nonnegative(y in 0.0..(2.0 * PI)) {
        for p in CosinePolynomial::all() {
            prop_assert!(evaluate(&p, y) >= -1e-9, "{} at {}", p.name, y);
        }
    }

    #[test]
    fn stechkin_inequality_holds(beta in 0.5..=1.0f64, y in 1e-3..50.0f64, sigma in 1.000_001..3.0f64) {
        prop_assert!(stechkin_inequality_check(beta, y, sigma).unwrap());
    }

    #[test]
    fn stechkin_pair_is_a_crossing(th in 1.65..2.0f64, eta0 in 1e-3..0.08f64, gap in 0.005..0.05f64) {
        let tf = ThetaFunction::with_defaults(th).unwrap();
        let sigma0 = 1.0 - gap;
        if let Ok(sp) = solve_delta_kappa(sigma0, eta0, tf.h0, tf.m_theta) {
            let k2 = kappa2(sp.delta_q, sigma0, eta0, tf.h0, tf.m_theta).unwrap();
            let k3 = kappa3(sp.delta_q, sigma0, eta0, tf.h0, tf.m_theta).unwrap();
            prop_assert!((k2 - k3).abs() <= 1e-9);
            prop_assert!(sp.kappa_q > 0.0 && sp.kappa_q < 1.0);
        }
    }

    #[test]
    fn derived_scalars_are_consistent(t0 in 1u64..5000, r in 1.0..9.0f64, extra in 0.0..3.0f64, idx in 0usize..11) {
        let case = CaseId::ALL[idx].config();
        let big_r = r + extra;
        let (eta0, sigma0, omega0) = derived_scalars(&case, t0, r, big_r);
        prop_assert!(eta0 > 0.0 && sigma0 < 1.0);
        prop_assert!(((1.0 - sigma0) / eta0 - omega0).abs() <= 1e-12 * omega0);
        prop_assert!((eta0 * r * (case.q0 * case.y0).ln() - 1.0).abs() <= 1e-12);
        // A larger t0 or R moves σ0 towards 1.
        let (_, sigma_more, _) = derived_scalars(&case, t0 + 1, r, big_r + 0.1);
        prop_assert!(sigma_more > sigma0);
    }

    #[test]
    fn case_ids_parse_their_own_labels(idx in 0usize..11, lower in any::<bool>(), dotted in any::<bool>()) {
        let id = CaseId::ALL[idx];
        let mut s = id.to_string();
        if !dotted { s = s.replace('.', ""); }
        if lower { s = s.to_lowercase(); }
        prop_assert_eq!(s.parse::<CaseId>().unwrap(), id);
    }
}

#[test]
fn unknown_case_ids_are_rejected() {
    for s in ["", "V.A", "I.D", "IIII.A", "IV.C"] {
        assert!(s.parse::<CaseId>().is_err(), "{s}");
    }
}
