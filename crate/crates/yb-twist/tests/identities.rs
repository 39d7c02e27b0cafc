use num_complex::Complex64 as C64;
use proptest::prelude::*;
use yb_twist::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn all_identities_hold(
        ur in -1.0f64..1.0, ui in -0.3f64..0.3, vr in -1.0f64..1.0, vi in -0.3f64..0.3,
        eta in 0.05f64..0.45, d in 0.2f64..2.0,
    ) {
        for kind in [TwistKind::Trig, TwistKind::Rat] {
            let r = twist_point_residuals(kind, c(eta, 0.0), c(d, 0.3), c(ur, ui), c(vr, vi)).unwrap();
            for (name, v) in r {
                prop_assert!(v < 1e-11, "{}/{name}: {v}", kind.name());
            }
        }
    }
}

#[test]
fn trig_sample_of_ten() {
    let sample: Vec<_> = (0..10).map(|k| (c(0.1 + 0.08 * k as f64, 0.05), c(-0.3 + 0.05 * k as f64, -0.02))).collect();
    let rep = twist_residuals(TwistKind::Trig, c(0.21, 0.0), c(1.0, 0.0), &sample).unwrap();
    assert!(rep.passed, "{:?}", rep.residuals);
    assert_eq!(rep.residuals.len(), 4);
}

#[test]
fn only_eta_reading_satisfies_conjugation() {
    let (eta, b, u, v) = (c(0.2, 0.0), c(1.0, 0.0), c(0.37, 0.05), c(-0.21, 0.0));
    let conj = |h| twist_point_residuals_reading(TwistKind::Rat, eta, b, u, v, h).unwrap()[2].1;
    assert!(conj(HReading::Eta) < 1e-13);
    assert!(conj(HReading::U) > 1e-3);
    assert!(conj(HReading::One) > 1e-3);
}
