//! 2×2 Lax operators whose entries are difference operators in an internal
//! variable `w`, and the RLL equation
//!
//! ```text
//! R12(u−v) L1(u) L2(v) = L2(v) L1(u) R12(u−v)
//! ```
//!
//! checked entrywise on test functions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;
use yb_linalg::{CheckReport, LinalgError, Matrix, VariantChoice};
use yb_sklyanin::{
    build_generators, op_residual, standard_test_fns, trig_to_elliptic, BasisChange, DiffOp, Family, GeneratorSet,
    SklyaninError, TestFn,
};
use yb_sl2::{build_r, gauge_trig, tau_from_q, Sl2Error, Sl2Family, Sl2Params};
use yb_theta::{theta_char, Characteristic, ThetaParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaxError {
    #[error("L-operator variant {0:?} does not belong to the {1} family")]
    FamilyMismatch(LaxVariant, Family),
    #[error("pole guard: {0}")]
    PoleGuard(String),
    #[error(transparent)]
    Sklyanin(#[from] SklyaninError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Theta(#[from] yb_theta::ThetaError),
}

pub type Result<T> = std::result::Result<T, LaxError>;

/// Transcription variants of the displayed L-operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaxVariant {
    /// `(2,1)` coefficient `θ01(u)/θ01(2η)` as displayed.
    EllipticPrinted,
    /// `(2,1)` coefficient `θ01(u)/(2θ01(η))`, matching `(1,2)`.
    EllipticFixed21,
    /// Displayed trig matrix with `S1` on the diagonal.
    TrigPrintedS1,
    /// Displayed trig matrix with `S3` on the diagonal.
    TrigPrintedS3,
    /// Gauge limit of the elliptic L.
    TrigGaugeLimit,
    /// Displayed rational entries.
    RatPrinted,
    /// Rational `(2,1)` with `β(u²−η²)S3` in place of the `S2` term.
    RatL21S3,
}

impl LaxVariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::EllipticPrinted => "printed",
            Self::EllipticFixed21 => "fixed_21",
            Self::TrigPrintedS1 => "printed_s1_diagonal",
            Self::TrigPrintedS3 => "printed_s3_diagonal",
            Self::TrigGaugeLimit => "gauge_limit",
            Self::RatPrinted => "printed",
            Self::RatL21S3 => "l21_s3",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Self::EllipticPrinted | Self::EllipticFixed21 => Family::Elliptic,
            Self::TrigPrintedS1 | Self::TrigPrintedS3 | Self::TrigGaugeLimit => Family::Trig,
            Self::RatPrinted | Self::RatL21S3 => Family::Rat,
        }
    }

    pub fn all_for(family: Family) -> &'static [LaxVariant] {
        match family {
            Family::Elliptic => &[Self::EllipticPrinted, Self::EllipticFixed21],
            Family::Trig => &[Self::TrigPrintedS1, Self::TrigPrintedS3, Self::TrigGaugeLimit],
            Family::Rat => &[Self::RatPrinted, Self::RatL21S3],
        }
    }

    /// Default variant: the residual-selected one where a variant works, the
    /// displayed one otherwise.
    pub fn default_for(family: Family) -> LaxVariant {
        match family {
            Family::Elliptic => Self::EllipticFixed21,
            Family::Trig => Self::TrigGaugeLimit,
            Family::Rat => Self::RatPrinted,
        }
    }
}

/// The matching R-matrix family.
pub fn r_family(family: Family) -> Sl2Family {
    match family {
        Family::Elliptic => Sl2Family::Elliptic,
        Family::Trig => Sl2Family::TrigDeformed,
        Family::Rat => Sl2Family::RatDeformed,
    }
}

#[derive(Debug, Clone)]
pub struct LaxOperator {
    pub family: Family,
    pub variant: LaxVariant,
    pub u: C64,
    pub entries: [[DiffOp; 2]; 2],
}

impl LaxOperator {
    pub fn entry(&self, i: usize, j: usize) -> &DiffOp {
        &self.entries[i][j]
    }

    pub fn zeroed(&self) -> Self {
        let z = DiffOp::zero(self.entries[0][0].eta());
        Self { entries: [[z.clone(), z.clone()], [z.clone(), z]], ..self.clone() }
    }
}

fn lin(terms: &[(&DiffOp, C64)]) -> DiffOp {
    let mut it = terms.iter();
    let (op, c) = it.next().expect("nonempty combination");
    it.fold(*op * *c, |acc, (op, c)| &acc + &(*op * *c))
}

fn guard(v: C64, what: &str) -> Result<C64> {
    if v.norm() < 1e-12 || !v.is_finite() {
        return Err(LaxError::PoleGuard(format!("{what} = {v}")));
    }
    Ok(v)
}

/// Entries of the L-operator for a raw generator quadruple.
///
/// `deform` is `α` for the trigonometric family and `β` for the rational one;
/// the elliptic family ignores it and needs `theta`.
pub fn lax_entries(
    variant: LaxVariant,
    u: C64,
    s: &[DiffOp; 4],
    eta: C64,
    theta: Option<&ThetaParams>,
    deform: C64,
) -> Result<[[DiffOp; 2]; 2]> {
    let i = C64::i();
    let one = C64::new(1.0, 0.0);
    Ok(match variant {
        LaxVariant::EllipticPrinted | LaxVariant::EllipticFixed21 => {
            use Characteristic::*;
            let p = theta.ok_or(SklyaninError::MissingTau)?;
            let th = |ch, z| theta_char(ch, z, p);
            let half = |ch| -> Result<C64> { Ok(th(ch, u)? / guard(th(ch, eta)? * 2.0, ch.label())?) };
            let (a, b, c, d) = (half(T11)?, half(T10)?, half(T01)?, half(T00)?);
            let c21 = match variant {
                LaxVariant::EllipticPrinted => th(T01, u)? / guard(th(T01, eta * 2.0)?, "theta01(2 eta)")?,
                _ => c,
            };
            [
                [lin(&[(&s[0], a), (&s[3], -b)]), lin(&[(&s[1], c), (&s[2], i * d)])],
                [lin(&[(&s[1], c21), (&s[2], -i * d)]), lin(&[(&s[0], a), (&s[3], b)])],
            ]
        }
        LaxVariant::TrigPrintedS1 | LaxVariant::TrigPrintedS3 => {
            let al = deform;
            let a = (u * PI).sin() / guard((eta * PI).tan(), "tan(pi eta)")?;
            let b = (u * PI).sin();
            let dg = if variant == LaxVariant::TrigPrintedS1 { &s[1] } else { &s[3] };
            let cc = (u * 2.0 * PI).cos() - (eta * 2.0 * PI).cos();
            let k = al * al * cc;
            [
                [lin(&[(&s[0], a), (dg, -b)]), lin(&[(&s[1], one), (&s[2], i)])],
                [lin(&[(&s[1], k + 1.0), (&s[2], i * k - i)]), lin(&[(&s[0], a), (dg, b)])],
            ]
        }
        LaxVariant::TrigGaugeLimit => {
            let al = guard(deform, "alpha")?;
            let a = (u * PI).sin() / guard((eta * PI).sin() * 2.0, "sin(pi eta)")?;
            let b = (u * PI).cos() / guard((eta * PI).cos() * 2.0, "cos(pi eta)")?;
            let cc = (u * 2.0 * PI).cos() - (eta * 2.0 * PI).cos();
            // T₊ = S1 − iS2, T₋ = S1 + iS2.
            let (p1, p2) = (-al * cc, al / 2.0);
            [
                [lin(&[(&s[0], a), (&s[3], b)]), lin(&[(&s[1], 0.5 / al), (&s[2], -i * 0.5 / al)])],
                [lin(&[(&s[1], p1 + p2), (&s[2], -i * p1 + i * p2)]), lin(&[(&s[0], a), (&s[3], -b)])],
            ]
        }
        LaxVariant::RatPrinted | LaxVariant::RatL21S3 => {
            let bt = deform;
            let e = guard(eta, "eta")?;
            let (u2, u4, e2, e3, e4) = (u * u, u.powi(4), e * e, e.powi(3), e.powi(4));
            let k = bt / (e * 2.0);
            let h = one / (e * 2.0);
            let l11 = lin(&[(&s[1], k * (-e * u2 + e3)), (&s[2], k * (-i * u2 * e + i * e3)), (&s[3], -h * e), (&s[0], h * u)]);
            let l22 = lin(&[(&s[1], k * (-e3 + u2 * e)), (&s[2], k * (i * u2 * e - i * e3)), (&s[3], h * e), (&s[0], h * u)]);
            let l12 = lin(&[(&s[1], C64::new(0.5, 0.0)), (&s[2], i * 0.5)]);
            let l21 = match variant {
                LaxVariant::RatPrinted => {
                    let b2 = bt * bt;
                    lin(&[
                        (&s[2], b2 * (i * e4 * 1.5 - i * e2 * u2 - i * u4 * 0.5) + bt * (u2 - e2) - i * 0.5),
                        (&s[1], b2 * (-u4 * 0.5 - u2 * e2 + e4 * 1.5) + 0.5),
                    ])
                }
                _ => {
                    let quart = -(u2 - e2) * (u2 + e2 * 3.0) * bt * bt * 0.5;
                    lin(&[(&s[1], quart + 0.5), (&s[2], i * quart - i * 0.5), (&s[3], (u2 - e2) * bt)])
                }
            };
            [[l11, l12], [l21, l22]]
        }
    })
}

/// L-operator for a generator set in the family's default variant.
pub fn build_lax(u: C64, g: &GeneratorSet, deform: C64) -> Result<LaxOperator> {
    build_lax_variant(LaxVariant::default_for(g.family), u, g, deform)
}

pub fn build_lax_variant(variant: LaxVariant, u: C64, g: &GeneratorSet, deform: C64) -> Result<LaxOperator> {
    if variant.family() != g.family {
        return Err(LaxError::FamilyMismatch(variant, g.family));
    }
    let entries = lax_entries(variant, u, &g.ops, g.eta, g.theta.as_ref(), deform)?;
    Ok(LaxOperator { family: g.family, variant, u, entries })
}

/// The matching R-matrix at `u − v`.
pub fn rll_r_matrix(family: Family, w: C64, eta: C64, theta: Option<&ThetaParams>, deform: C64) -> Result<Matrix> {
    let mut p = Sl2Params::new(w, eta);
    match family {
        Family::Elliptic => {
            let t = theta.ok_or(SklyaninError::MissingTau)?;
            p = p.with_tau(t.tau());
            p.trunc_tol = t.trunc_tol();
            p.max_terms = t.max_terms();
        }
        Family::Trig => p = p.with_alpha(deform),
        Family::Rat => p = p.with_beta(deform),
    }
    Ok(build_r(r_family(family), &p)?)
}

/// Raw RLL residual: max over the 16 entries, test functions and `w` points.
pub fn rll_residual_raw(r: &Matrix, lu: &LaxOperator, lv: &LaxOperator, fns: &[TestFn], ws: &[C64]) -> f64 {
    let eta = lu.entries[0][0].eta();
    let idx = |a: usize, c: usize| 2 * a + c;
    // (L1 L2)[2a+c][2b+d] = Lu[a][b]∘Lv[c][d]; (L2 L1) composes the other way.
    let mut l12: Vec<Vec<DiffOp>> = vec![vec![DiffOp::zero(eta); 4]; 4];
    let mut l21 = l12.clone();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    l12[idx(a, c)][idx(b, d)] = &lu.entries[a][b] * &lv.entries[c][d];
                    l21[idx(a, c)][idx(b, d)] = &lv.entries[c][d] * &lu.entries[a][b];
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut lhs = DiffOp::zero(eta);
            let mut rhs = DiffOp::zero(eta);
            for k in 0..4 {
                if r[(i, k)] != C64::new(0.0, 0.0) {
                    lhs = &lhs + &(&l12[k][j] * r[(i, k)]);
                }
                if r[(k, j)] != C64::new(0.0, 0.0) {
                    rhs = &rhs + &(&l21[i][k] * r[(k, j)]);
                }
            }
            worst = worst.max(op_residual(&lhs, &rhs, fns, ws));
        }
    }
    worst
}

/// RLL residual of one variant at spectral points `u`, `v`.
pub fn rll_residual(variant: LaxVariant, g: &GeneratorSet, deform: C64, u: C64, v: C64, ws: &[C64]) -> Result<f64> {
    let lu = build_lax_variant(variant, u, g, deform)?;
    let lv = build_lax_variant(variant, v, g, deform)?;
    let r = rll_r_matrix(g.family, u - v, g.eta, g.theta.as_ref(), deform)?;
    Ok(rll_residual_raw(&r, &lu, &lv, &standard_test_fns(), ws))
}

/// RLL check over every declared variant of the family.
///
/// The variant with the smallest residual is selected and recorded; the
/// report's residual `rll` is that variant's value against tolerance `1e-8`.
pub fn rll_check(g: &GeneratorSet, deform: C64, u: C64, v: C64, ws: &[C64]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("rll", 1e-8);
    let mut scored = Vec::new();
    for &var in LaxVariant::all_for(g.family) {
        scored.push((var.name().to_string(), rll_residual(var, g, deform, u, v, ws)?));
    }
    let choice = VariantChoice::select(scored);
    rep.residual("rll", choice.selected_residual());
    rep.variant("lax", choice);
    rep.param("family", g.family.name());
    Ok(rep)
}

/// Distance between `G L^e(u) G⁻¹`, built from trig generators through the
/// derived basis change at nome `q`, and the gauge-limit trig L.
pub fn trig_lax_consistency(u: C64, t: &GeneratorSet, alpha: C64, q: f64, ws: &[C64]) -> Result<f64> {
    if t.family != Family::Trig {
        return Err(LaxError::FamilyMismatch(LaxVariant::TrigGaugeLimit, t.family));
    }
    let tau = tau_from_q(C64::new(q, 0.0));
    let theta = ThetaParams::new(tau)?;
    let se = trig_to_elliptic(t, q, alpha, BasisChange::Derived)?;
    let le = lax_entries(LaxVariant::EllipticFixed21, u, &se, t.eta, Some(&theta), alpha)?;
    let g = gauge_trig(tau, alpha)?.m;
    let lt = lax_entries(LaxVariant::TrigGaugeLimit, u, &t.ops, t.eta, None, alpha)?;
    let fns = standard_test_fns();
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let conj = &le[i][j] * (g[(i, i)] / g[(j, j)]);
            worst = worst.max(op_residual(&conj, &lt[i][j], &fns, ws));
        }
    }
    Ok(worst)
}

/// Generators plus default-variant L in one call.
pub fn lax_for(family: Family, s: C64, eta: C64, tau: Option<C64>, u: C64, deform: C64) -> Result<LaxOperator> {
    let g = build_generators(family, s, eta, tau)?;
    build_lax(u, &g, deform)
}

#[cfg(test)]
mod tests {
    use super::*;
    use yb_sklyanin::default_points;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rational_l12_is_constant() {
        let g = build_generators(Family::Rat, c(0.5, 0.0), c(0.2, 0.0), None).unwrap();
        let pts = default_points(Family::Rat, g.eta, None, 5).unwrap();
        let a = build_lax(c(0.3, 0.0), &g, c(1.0, 0.0)).unwrap();
        let b = build_lax(c(1.7, 0.4), &g, c(1.0, 0.0)).unwrap();
        let want = &(&g.ops[1] * 0.5) + &(&g.ops[2] * c(0.0, 0.5));
        let fns = standard_test_fns();
        assert_eq!(op_residual(a.entry(0, 1), b.entry(0, 1), &fns, &pts), 0.0);
        assert!(op_residual(a.entry(0, 1), &want, &fns, &pts) < 1e-15);
    }

    #[test]
    fn trig_printed_l12() {
        let g = build_generators(Family::Trig, c(0.5, 0.0), c(0.2, 0.0), None).unwrap();
        let l = build_lax_variant(LaxVariant::TrigPrintedS1, c(0.3, 0.0), &g, c(1.0, 0.0)).unwrap();
        let want = &g.ops[1] + &(&g.ops[2] * C64::i());
        let pts = default_points(Family::Trig, g.eta, None, 4).unwrap();
        assert!(op_residual(l.entry(0, 1), &want, &standard_test_fns(), &pts) < 1e-15);
    }

    #[test]
    fn rational_l11_at_zero() {
        let (eta, beta) = (c(0.2, 0.0), c(0.7, 0.0));
        let g = build_generators(Family::Rat, c(0.5, 0.0), eta, None).unwrap();
        let l = build_lax(c(0.0, 0.0), &g, beta).unwrap();
        let t = &g.ops[1] + &(&g.ops[2] * C64::i());
        let want = &(&t * (eta * eta * beta / 2.0)) - &(&g.ops[3] * 0.5);
        let pts = default_points(Family::Rat, eta, None, 4).unwrap();
        assert!(op_residual(l.entry(0, 0), &want, &standard_test_fns(), &pts) < 1e-14);
    }

    #[test]
    fn family_mismatch() {
        let g = build_generators(Family::Trig, c(0.5, 0.0), c(0.2, 0.0), None).unwrap();
        assert!(matches!(
            build_lax_variant(LaxVariant::RatPrinted, c(0.3, 0.0), &g, c(1.0, 0.0)),
            Err(LaxError::FamilyMismatch(..))
        ));
    }

    #[test]
    fn zero_l_gives_zero_residual() {
        let g = build_generators(Family::Trig, c(0.5, 0.0), c(0.2, 0.0), None).unwrap();
        let ws = default_points(Family::Trig, g.eta, None, 5).unwrap();
        let lu = build_lax(c(0.31, 0.0), &g, c(1.0, 0.0)).unwrap().zeroed();
        let lv = build_lax(c(-0.12, 0.0), &g, c(1.0, 0.0)).unwrap().zeroed();
        let r = rll_r_matrix(Family::Trig, c(0.43, 0.0), g.eta, None, c(1.0, 0.0)).unwrap();
        assert_eq!(rll_residual_raw(&r, &lu, &lv, &standard_test_fns(), &ws), 0.0);
    }

    #[test]
    fn trig_gauge_limit_passes() {
        let g = build_generators(Family::Trig, c(0.5, 0.0), c(0.21, 0.0), None).unwrap();
        let ws = default_points(Family::Trig, g.eta, None, 5).unwrap();
        let rep = rll_check(&g, c(1.3, 0.0), c(0.31, 0.02), c(-0.17, 0.0), &ws).unwrap();
        assert!(rep.passed, "{:?}", rep.variant_choices);
        assert_eq!(rep.variant_choices["lax"].selected, "gauge_limit");
    }
}
