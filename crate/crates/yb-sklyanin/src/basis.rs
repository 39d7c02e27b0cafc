use num_complex::Complex64 as C64;
use yb_linalg::{CheckReport, VariantChoice};
use yb_theta::ThetaParams;

use crate::constants::elliptic_j;
use crate::diffop::{standard_test_fns, DiffOp};
use crate::generators::{Family, GeneratorSet};
use crate::relations::elliptic_relations;
use crate::{Result, SklyaninError};

/// Elliptic generators written through trigonometric ones at nome `q`.
///
/// `Printed` transcribes the displayed combinations, in which `S1` is `i·S2`
/// identically. `Derived` follows from conjugating the generator matrix by
/// `diag(g, 1/g)` with `g² = q^{1/4}`, composed with the automorphism
/// `S3 → −S3` that aligns it with the gauge limit of the elliptic L-operator:
/// `S1 ± iS2 ↦ q^{∓1/4}(S1^t ∓ iS2^t)`. It carries no `α`: the trigonometric
/// difference operators realise the algebra at `α = 1`, and any other value
/// rescales `T±` out of the relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChange {
    Printed,
    Derived,
}

impl BasisChange {
    pub fn name(self) -> &'static str {
        match self {
            Self::Printed => "printed",
            Self::Derived => "derived",
        }
    }
}

pub fn trig_to_elliptic(t: &GeneratorSet, q: f64, alpha: C64, variant: BasisChange) -> Result<[DiffOp; 4]> {
    if t.family != Family::Trig {
        return Err(SklyaninError::Invalid(format!("basis change needs trig generators, got {}", t.family)));
    }
    if !(q > 0.0 && q < 1.0) || alpha.norm() == 0.0 {
        return Err(SklyaninError::Invalid(format!("need 0 < q < 1 and alpha != 0, got q = {q}, alpha = {alpha}")));
    }
    let i = C64::i();
    let [s0, s1, s2, s3] = &t.ops;
    let tp = s1 + &(s2 * i);
    let tm = s1 - &(s2 * i);
    let big = alpha * q.powf(-0.25);
    let small = q.powf(0.25) / alpha;
    let (e1, e2) = match variant {
        BasisChange::Printed => (
            &(&tp * (big / (i * 2.0))) + &(&tm * (small / (i * 2.0))),
            &(&tp * (big / 2.0)) + &(&tm * (small / 2.0)),
        ),
        BasisChange::Derived => {
            let (big, small) = (C64::new(q.powf(-0.25), 0.0), C64::new(q.powf(0.25), 0.0));
            let e1 = &(&tm * (big / 2.0)) + &(&tp * (small / 2.0));
            let e2 = &(&(&tm * big) - &(&tp * small)) * (1.0 / (i * 2.0));
            return Ok([s0.clone(), e1, e2, -s3]);
        }
    };
    Ok([s0.clone(), e1, e2, s3.clone()])
}

/// Worst elliptic-relation residual of the changed generators, with `J` at `q`.
pub fn basis_change_residual(t: &GeneratorSet, q: f64, alpha: C64, variant: BasisChange, points: &[C64]) -> Result<f64> {
    let ops = trig_to_elliptic(t, q, alpha, variant)?;
    let j = elliptic_j(t.eta, &ThetaParams::from_nome(q)?)?;
    let fns = standard_test_fns();
    Ok(elliptic_relations(&ops, &j).iter().map(|r| r.residual(&fns, points)).fold(0.0, f64::max))
}

/// Residual curve over the nomes `qs` (strictly decreasing), both variants,
/// derived variant selected.
///
/// Gated: `final` (residual at the last nome, tol 1e-4) and `decreasing`.
/// The per-nome values go to the diagnostics as `q=…` and `printed/q=…`.
pub fn basis_change_check(t: &GeneratorSet, qs: &[f64], alpha: C64, points: &[C64]) -> Result<CheckReport> {
    if qs.is_empty() || qs.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(SklyaninError::Invalid("nome sequence must be nonempty and strictly decreasing".into()));
    }
    let mut rep = CheckReport::new("basis-change", 1e-4);
    let mut worst = [0.0f64; 2];
    let mut curve = Vec::new();
    for &q in qs {
        for (slot, v) in [BasisChange::Printed, BasisChange::Derived].into_iter().enumerate() {
            let r = basis_change_residual(t, q, alpha, v, points)?;
            worst[slot] = worst[slot].max(r);
            if v == BasisChange::Derived {
                rep.diagnostic(format!("q={q:e}"), r);
                curve.push(r);
            } else {
                rep.diagnostic(format!("printed/q={q:e}"), r);
            }
        }
    }
    rep.residual("final", *curve.last().expect("nonempty"));
    rep.condition("decreasing", curve.windows(2).all(|w| w[1] < w[0]));
    rep.variant(
        "basis_change",
        VariantChoice::select(vec![
            (BasisChange::Printed.name().into(), worst[0]),
            (BasisChange::Derived.name().into(), worst[1]),
        ]),
    );
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
    fn printed_change_makes_s1_proportional_to_s2() {
        let t = build_generators(Family::Trig, c(0.5, 0.0), c(0.21, 0.0), None).unwrap();
        let e = trig_to_elliptic(&t, 1e-6, c(1.3, 0.0), BasisChange::Printed).unwrap();
        let pts = default_points(Family::Trig, t.eta, None, 4).unwrap();
        let r = crate::diffop::op_residual(&e[1], &(&e[2] * -C64::i()), &standard_test_fns(), &pts);
        assert!(r < 1e-12);
    }

    #[test]
    fn derived_change_converges() {
        let t = build_generators(Family::Trig, c(0.5, 0.0), c(0.21, 0.0), None).unwrap();
        let pts = default_points(Family::Trig, t.eta, None, 6).unwrap();
        let r4 = basis_change_residual(&t, 1e-4, c(1.0, 0.0), BasisChange::Derived, &pts).unwrap();
        let r8 = basis_change_residual(&t, 1e-8, c(1.0, 0.0), BasisChange::Derived, &pts).unwrap();
        assert!(r8 < 1e-4 && r8 < r4, "{r4} {r8}");
    }

    #[test]
    fn rejects_non_trig_input() {
        let r = build_generators(Family::Rat, c(0.5, 0.0), c(0.21, 0.0), None).unwrap();
        assert!(trig_to_elliptic(&r, 1e-6, c(1.0, 0.0), BasisChange::Derived).is_err());
    }
}
