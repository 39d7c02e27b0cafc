use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use yb_linalg::{rel_diff, CheckReport};
use yb_theta::{theta_char, Characteristic};

use crate::constants::{structure_constants, StructureConstants};
use crate::diffop::{op_residual, standard_test_fns, DiffOp};
use crate::generators::{Family, GeneratorSet};
use crate::Result;

fn sq(a: &DiffOp) -> DiffOp {
    a * a
}

fn acom(a: &DiffOp, b: &DiffOp) -> DiffOp {
    &(a * b) + &(b * a)
}

/// `(Ω1, Ω2)` for the generator set's family.
pub fn casimirs(g: &GeneratorSet) -> Result<(DiffOp, DiffOp)> {
    let s = &g.ops;
    let sq: Vec<DiffOp> = s.iter().map(sq).collect();
    let omega1 = &(&(&sq[0] + &sq[1]) + &sq[2]) + &sq[3];
    let i = C64::i();
    let omega2 = match structure_constants(g.family, g.eta, g.theta.as_ref())? {
        StructureConstants::Elliptic { j } => &(&(&sq[1] * j[0]) + &(&sq[2] * j[1])) + &(&sq[3] * j[2]),
        StructureConstants::Trig { l1, l3, .. } => {
            let x = &(&sq[1] - &sq[2]) - &(&acom(&s[1], &s[2]) * i);
            let head = &(&(-&sq[1]) - &sq[2]) - &(&sq[3] * l1);
            &head - &(&x * (l3 / 4.0))
        }
        StructureConstants::Rat => {
            let (e2, e4) = (g.eta.powi(2), g.eta.powi(4));
            let terms = [
                &sq[1] * (1.0 - e4 * 12.0),
                &sq[2] * (e4 * 12.0 + 1.0),
                sq[3].clone(),
                &acom(&s[1], &s[2]) * (i * e4 * 12.0),
                &acom(&s[1], &s[3]) * (e2 * 2.0),
                &acom(&s[2], &s[3]) * (-i * e2 * 2.0),
            ];
            let mut it = terms.into_iter();
            let first = it.next().expect("terms");
            it.fold(first, |a, b| &a + &b)
        }
    };
    Ok((omega1, omega2))
}

/// Which closed-form eigenvalue to compare against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Printed,
    Corrected,
}

/// Closed-form eigenvalue of `Ω_which` (`which ∈ {1, 2}`).
///
/// The printed elliptic `Ω2` value has `θ11(2η)` where the operator gives
/// `θ11(2sη)`; the printed trigonometric `Ω2` value has the wrong sign. The
/// rational values agree in both forms.
pub fn casimir_closed_form(g: &GeneratorSet, which: u8, form: ClosedForm) -> Result<C64> {
    let (s, eta) = (g.s, g.eta);
    Ok(match (g.family, which) {
        (Family::Elliptic, 1) => {
            let p = g.theta_params()?;
            theta_char(Characteristic::T11, (s * 2.0 + 1.0) * eta, &p)?.powi(2) * 4.0
        }
        (Family::Elliptic, _) => {
            let p = g.theta_params()?;
            let last = match form {
                ClosedForm::Printed => eta * 2.0,
                ClosedForm::Corrected => s * eta * 2.0,
            };
            theta_char(Characteristic::T11, (s + 1.0) * eta * 2.0, &p)? * theta_char(Characteristic::T11, last, &p)? * 4.0
        }
        (Family::Trig, 1) => (eta * (s * 2.0 + 1.0) * PI).sin().powi(2) * 16.0,
        (Family::Trig, _) => {
            let v = (eta * (s + 1.0) * 2.0 * PI).sin() * (eta * s * 2.0 * PI).sin() * 16.0;
            match form {
                ClosedForm::Printed => v,
                ClosedForm::Corrected => -v,
            }
        }
        (Family::Rat, 1) => eta * eta * (s * 2.0 + 1.0).powi(2) * 16.0,
        (Family::Rat, _) => eta * eta * s * (s + 1.0) * 64.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEstimate {
    /// Mean of `(Ωf)(u)/f(u)` over test functions and points.
    pub value: C64,
    /// `max |ratio − value| / (1 + |value|)`.
    pub spread: f64,
}

pub fn eigenvalue_estimate(op: &DiffOp, points: &[C64]) -> EigenEstimate {
    let mut ratios = Vec::new();
    for f in standard_test_fns() {
        for &u in points {
            let fu = f(u);
            if fu.norm() > 1e-3 {
                ratios.push(op.apply(f.as_ref(), u) / fu);
            }
        }
    }
    if ratios.is_empty() {
        return EigenEstimate { value: C64::new(f64::NAN, f64::NAN), spread: f64::INFINITY };
    }
    let value = ratios.iter().sum::<C64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| (r - value).norm() / (1.0 + value.norm())).fold(0.0, f64::max);
    EigenEstimate { value, spread: if spread.is_nan() { f64::INFINITY } else { spread } }
}

/// Scalarity, closed-form eigenvalues (printed) and centrality of `Ω1`, `Ω2`.
///
/// Residual names: `omegaK/spread` (tol 1e-9), `omegaK/eigenvalue` and
/// `omegaK/central` (tol 1e-8). The measured eigenvalue and its distance to
/// the corrected closed form go to the diagnostics.
pub fn casimir_check(g: &GeneratorSet, points: &[C64]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("casimir", 1e-8);
    let (o1, o2) = casimirs(g)?;
    let fns = standard_test_fns();
    for (k, op) in [(1u8, &o1), (2u8, &o2)] {
        let est = eigenvalue_estimate(op, points);
        let printed = casimir_closed_form(g, k, ClosedForm::Printed)?;
        let corrected = casimir_closed_form(g, k, ClosedForm::Corrected)?;
        rep.residual_with_tol(format!("omega{k}/spread"), est.spread, 1e-9);
        rep.residual(format!("omega{k}/eigenvalue"), rel_diff(est.value, printed));
        let central = g.ops.iter().map(|s| op_residual(&(op * s), &(s * op), &fns, points)).fold(0.0, f64::max);
        rep.residual(format!("omega{k}/central"), central);
        rep.diagnostic(format!("omega{k}/measured_re"), est.value.re);
        rep.diagnostic(format!("omega{k}/measured_im"), est.value.im);
        rep.diagnostic(format!("omega{k}/printed_re"), printed.re);
        rep.diagnostic(format!("omega{k}/corrected_re"), corrected.re);
        rep.diagnostic(format!("omega{k}/eigenvalue_vs_corrected"), rel_diff(est.value, corrected));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::build_generators;
    use crate::relations::default_points;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trig_omega1_reference_value() {
        let g = build_generators(Family::Trig, c(1.0, 0.0), c(0.3, 0.0), None).unwrap();
        let v = casimir_closed_form(&g, 1, ClosedForm::Printed).unwrap();
        assert!((v.re - 1.527864).abs() < 1e-6);
        let pts = default_points(Family::Trig, g.eta, None, 6).unwrap();
        let est = eigenvalue_estimate(&casimirs(&g).unwrap().0, &pts);
        assert!((est.value - v).norm() < 1e-9 && est.spread < 1e-9);
    }

    #[test]
    fn rat_reference_values() {
        let g = build_generators(Family::Rat, c(0.5, 0.0), c(0.25, 0.0), None).unwrap();
        assert!((casimir_closed_form(&g, 1, ClosedForm::Printed).unwrap() - 4.0).norm() < 1e-14);
        let pts = default_points(Family::Rat, g.eta, None, 6).unwrap();
        assert!((eigenvalue_estimate(&casimirs(&g).unwrap().0, &pts).value - 4.0).norm() < 1e-9);
        let g = build_generators(Family::Rat, c(1.0, 0.0), c(0.5, 0.0), None).unwrap();
        assert!((casimir_closed_form(&g, 2, ClosedForm::Printed).unwrap() - 32.0).norm() < 1e-13);
    }

    #[test]
    fn trig_omega2_has_opposite_sign() {
        let g = build_generators(Family::Trig, c(0.7, 0.0), c(0.2, 0.0), None).unwrap();
        let pts = default_points(Family::Trig, g.eta, None, 6).unwrap();
        let rep = casimir_check(&g, &pts).unwrap();
        assert!(rep.residuals["omega2/spread"] < 1e-9);
        assert!(rep.residuals["omega2/central"] < 1e-8);
        assert!(rep.diagnostics["omega2/eigenvalue_vs_corrected"] < 1e-9);
        assert!(rep.residuals["omega2/eigenvalue"] > 1e-2);
    }

    #[test]
    fn scalar_operator_has_zero_spread() {
        let e = c(0.2, 0.0);
        let est = eigenvalue_estimate(&DiffOp::scalar(e, c(3.0, -1.0)), &[c(0.3, 0.0), c(0.8, 0.1)]);
        assert!(est.spread < 1e-15);
        assert!((est.value - c(3.0, -1.0)).norm() < 1e-15);
    }
}
