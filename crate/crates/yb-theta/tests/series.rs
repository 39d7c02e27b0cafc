use num_complex::Complex64 as C64;
use proptest::prelude::*;
use yb_theta::{theta_char, Characteristic::*, ThetaParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn parity(re in -1.0f64..1.0, im in -0.3f64..0.3, ti in 0.5f64..2.0) {
        let p = ThetaParams::new(C64::new(0.0, ti)).unwrap();
        let u = C64::new(re, im);
        let odd = theta_char(T11, u, &p).unwrap() + theta_char(T11, -u, &p).unwrap();
        prop_assert!(odd.norm() < 1e-12);
        for ch in [T10, T01, T00] {
            let a = theta_char(ch, u, &p).unwrap();
            let b = theta_char(ch, -u, &p).unwrap();
            prop_assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn doubling_max_terms_is_stable(re in -1.0f64..1.0, im in -0.3f64..0.3, ti in 0.5f64..2.0) {
        let tau = C64::new(0.1, ti);
        let p = ThetaParams::new(tau).unwrap();
        let p2 = ThetaParams::with_truncation(tau, p.trunc_tol(), 2 * p.max_terms()).unwrap();
        let u = C64::new(re, im);
        for ch in [T11, T10, T01, T00] {
            let a = theta_char(ch, u, &p).unwrap();
            let b = theta_char(ch, u, &p2).unwrap();
            prop_assert!((a - b).norm() <= p.trunc_tol() * a.norm().max(1e-300));
        }
    }
}

#[test]
fn matches_product_formula() {
    // Jacobi triple product for θ00 at τ = i: Π (1-q^{2n})(1+q^{2n-1})², q = e^{-π}.
    let p = ThetaParams::new(C64::i()).unwrap();
    let q = (-std::f64::consts::PI).exp();
    let prod: f64 = (1..40).map(|n| (1.0 - q.powi(2 * n)) * (1.0 + q.powi(2 * n - 1)).powi(2)).product();
    let v = theta_char(T00, C64::new(0.0, 0.0), &p).unwrap();
    assert!((v.re - prod).abs() < 1e-14);
}
