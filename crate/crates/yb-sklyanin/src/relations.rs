use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use yb_linalg::{CheckReport, VariantChoice};
use yb_theta::ThetaParams;

use crate::casimir::casimir_check;
use crate::constants::{j_ij, structure_constants, StructureConstants};
use crate::diffop::{op_residual, standard_test_fns, DiffOp, TestFn};
use crate::generators::{build_generators_with, point_guard_ok, Family, GenVariant, GeneratorSet};
use crate::{Result, SklyaninError};

/// `lhs = rhs` as a difference-operator identity.
#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    pub lhs: DiffOp,
    pub rhs: DiffOp,
}

impl Relation {
    fn new(name: impl Into<String>, lhs: DiffOp, rhs: DiffOp) -> Self {
        Self { name: name.into(), lhs, rhs }
    }

    pub fn residual(&self, fns: &[TestFn], points: &[C64]) -> f64 {
        op_residual(&self.lhs, &self.rhs, fns, points)
    }
}

/// Printed or fitted coefficients for the rational `[S0,S1]` and `[S0,S3]`.
/// The other families ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationForm {
    Printed,
    Fitted,
}

impl RelationForm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Printed => "printed",
            Self::Fitted => "fitted",
        }
    }
}

fn com(a: &DiffOp, b: &DiffOp) -> DiffOp {
    &(a * b) - &(b * a)
}

fn acom(a: &DiffOp, b: &DiffOp) -> DiffOp {
    &(a * b) + &(b * a)
}

fn sq(a: &DiffOp) -> DiffOp {
    a * a
}

fn sum(terms: &[DiffOp]) -> DiffOp {
    let mut it = terms.iter();
    let first = it.next().expect("nonempty sum").clone();
    it.fold(first, |acc, t| &acc + t)
}

const CYCLIC: [(usize, usize, usize); 3] = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];

fn cyclic(s: &[DiffOp; 4]) -> Vec<Relation> {
    let i = C64::i();
    CYCLIC
        .iter()
        .map(|&(a, b, k)| Relation::new(format!("[S{a},S{b}]"), com(&s[a], &s[b]), &acom(&s[0], &s[k]) * i))
        .collect()
}

/// `[Si,Sj] = i{S0,Sk}` and `[S0,Sk] = i J_ij {Si,Sj}` over cyclic `(i,j,k)`.
pub fn elliptic_relations(s: &[DiffOp; 4], j: &[C64; 3]) -> Vec<Relation> {
    let i = C64::i();
    let mut out = cyclic(s);
    for &(a, b, k) in &CYCLIC {
        out.push(Relation::new(format!("[S0,S{k}]"), com(&s[0], &s[k]), &acom(&s[a], &s[b]) * (i * j_ij(j, a, b))));
    }
    out.sort_by(|x, y| x.name.cmp(&y.name));
    out
}

fn trig_relations(s: &[DiffOp; 4], c: &[C64; 3]) -> Vec<Relation> {
    let i = C64::i();
    let [c1, c2, c3] = *c;
    let mut out = cyclic(s);
    out.push(Relation::new(
        "[S0,S1]",
        com(&s[0], &s[1]),
        sum(&[&acom(&s[1], &s[3]) * (c2 / 4.0), &acom(&s[2], &s[3]) * (i * (c1 * 2.0 - c2) / 4.0)]),
    ));
    out.push(Relation::new(
        "[S0,S2]",
        com(&s[0], &s[2]),
        sum(&[&acom(&s[1], &s[3]) * (-i * (c2 + c1 * 2.0) / 4.0), &acom(&s[2], &s[3]) * (-c2 / 4.0)]),
    ));
    let x = sum(&[sq(&s[1]), -&sq(&s[2]), &acom(&s[1], &s[2]) * -i]);
    out.push(Relation::new("[S0,S3]", com(&s[0], &s[3]), &x * (c3 / 2.0)));
    out.sort_by(|x, y| x.name.cmp(&y.name));
    out
}

fn rat_relations(s: &[DiffOp; 4], eta: C64, form: RelationForm) -> Vec<Relation> {
    let i = C64::i();
    let (e2, e4, e6) = (eta.powi(2), eta.powi(4), eta.powi(6));
    let mut out = cyclic(s);
    let k13 = match form {
        RelationForm::Printed => e2 * 8.0,
        RelationForm::Fitted => e4 * 8.0,
    };
    out.push(Relation::new(
        "[S0,S1]",
        com(&s[0], &s[1]),
        sum(&[
            &acom(&s[2], &s[3]) * (-i * e4 * 8.0),
            &acom(&s[1], &s[2]) * (i * (e4 * 8.0 + 1.0) * e2 * 2.0),
            &acom(&s[1], &s[3]) * k13,
            &sq(&s[1]) * (-e6 * 16.0),
            &sq(&s[2]) * ((e4 * 4.0 + 1.0) * e2 * 4.0),
            &sq(&s[3]) * (-e2 * 4.0),
        ]),
    ));
    out.push(Relation::new(
        "[S0,S2]",
        com(&s[0], &s[2]),
        sum(&[
            &acom(&s[2], &s[3]) * (-e4 * 8.0),
            &acom(&s[1], &s[2]) * ((e4 * 8.0 - 1.0) * e2 * 2.0),
            &acom(&s[1], &s[3]) * (-i * e4 * 8.0),
            &sq(&s[1]) * (i * e2 * (e4 * 4.0 - 1.0) * 4.0),
            &sq(&s[2]) * (-i * e6 * 16.0),
            &sq(&s[3]) * (i * e2 * 4.0),
        ]),
    ));
    let diff = &sq(&s[1]) - &sq(&s[2]);
    let rhs03 = match form {
        RelationForm::Printed => sum(&[
            &acom(&s[1], &s[3]) * (i * e4 * 16.0),
            &acom(&s[2], &s[3]) * (-i * e2 * 2.0),
            &diff * (-e4 * 16.0),
        ]),
        RelationForm::Fitted => sum(&[
            &acom(&s[2], &s[3]) * (-i * e2 * 2.0),
            &acom(&s[1], &s[2]) * (i * e4 * 16.0),
            &acom(&s[1], &s[3]) * (e2 * 2.0),
            &diff * (-e4 * 16.0),
        ]),
    };
    out.push(Relation::new("[S0,S3]", com(&s[0], &s[3]), rhs03));
    out.sort_by(|x, y| x.name.cmp(&y.name));
    out
}

/// The six quadratic relations of the generator set's family.
pub fn relations(g: &GeneratorSet, form: RelationForm) -> Result<Vec<Relation>> {
    let consts = structure_constants(g.family, g.eta, g.theta.as_ref())?;
    Ok(match consts {
        StructureConstants::Elliptic { j } => elliptic_relations(&g.ops, &j),
        StructureConstants::Trig { c, .. } => trig_relations(&g.ops, &c),
        StructureConstants::Rat => rat_relations(&g.ops, g.eta, form),
    })
}

/// Residual of every relation, as a report with tolerance `1e-8`.
///
/// For the rational family both relation forms are evaluated; the one with
/// the smaller worst residual is used and the choice is recorded.
pub fn relation_residuals(g: &GeneratorSet, fns: &[TestFn], points: &[C64]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("algebra", 1e-8);
    let eval = |form| -> Result<Vec<(String, f64)>> {
        Ok(relations(g, form)?.iter().map(|r| (r.name.clone(), r.residual(fns, points))).collect())
    };
    let chosen = if g.family == Family::Rat {
        let printed = eval(RelationForm::Printed)?;
        let fitted = eval(RelationForm::Fitted)?;
        for name in ["[S0,S1]", "[S0,S3]"] {
            let pick = |v: &[(String, f64)]| v.iter().find(|(n, _)| n == name).map_or(f64::INFINITY, |x| x.1);
            rep.variant(
                format!("relation{name}"),
                VariantChoice::select(vec![
                    (RelationForm::Printed.name().into(), pick(&printed)),
                    (RelationForm::Fitted.name().into(), pick(&fitted)),
                ]),
            );
        }
        let worst = |v: &[(String, f64)]| v.iter().map(|x| x.1).fold(0.0, f64::max);
        if worst(&fitted) < worst(&printed) {
            fitted
        } else {
            printed
        }
    } else {
        eval(RelationForm::Printed)?
    };
    for (name, v) in chosen {
        rep.residual(name, v);
    }
    Ok(rep)
}

/// Generator variant search plus relation check for one parameter draw.
///
/// Every declared generator variant is scored by its worst relation and
/// Casimir scalarity residual; the minimum is kept and recorded.
pub fn algebra_check(family: Family, s: C64, eta: C64, tau: Option<C64>, points: &[C64]) -> Result<CheckReport> {
    let theta = tau.map(ThetaParams::new).transpose()?;
    let fns = standard_test_fns();
    let mut scored = Vec::new();
    let mut best: Option<(f64, CheckReport)> = None;
    for &v in GenVariant::all_for(family) {
        let g = build_generators_with(v, s, eta, theta)?;
        let rel = relation_residuals(&g, &fns, points)?;
        let cas = casimir_check(&g, points)?;
        let score = rel
            .residuals
            .values()
            .chain(cas.residuals.iter().filter(|(k, _)| k.ends_with("spread")).map(|(_, v)| v))
            .fold(0.0, |a: f64, &b| a.max(b));
        scored.push((v.name().to_string(), score));
        if best.as_ref().map_or(true, |(b, _)| score < *b) {
            best = Some((score, rel));
        }
    }
    let (_, mut rep) = best.expect("at least one variant");
    rep.variant("generators", VariantChoice::select(scored));
    rep.param("family", family.name());
    Ok(rep)
}

/// Keep the first `n` candidates that pass the family's pole guard.
pub fn guarded_points(
    family: Family,
    eta: C64,
    theta: Option<&ThetaParams>,
    candidates: impl IntoIterator<Item = C64>,
    n: usize,
) -> Result<Vec<C64>> {
    let pts: Vec<C64> =
        candidates.into_iter().filter(|&u| point_guard_ok(family, u, eta, theta)).take(n).collect();
    if pts.len() < n {
        return Err(SklyaninError::PoleGuard(format!("only {} of {n} sample points pass the guard", pts.len())));
    }
    Ok(pts)
}

/// `n` deterministic guarded points from a Weyl sequence in a family box.
pub fn default_points(family: Family, eta: C64, theta: Option<&ThetaParams>, n: usize) -> Result<Vec<C64>> {
    let (g1, g2) = (0.754_877_666_246_692_8, 0.569_840_290_998_053_3);
    let cands = (1..4000).map(move |k| {
        let (x, y) = ((k as f64 * g1).fract(), (k as f64 * g2).fract());
        match family {
            Family::Trig | Family::Elliptic => C64::new(0.5 * x, 0.2 * y - 0.1),
            Family::Rat => C64::from_polar(0.3 + 1.2 * x, 2.0 * PI * y),
        }
    });
    guarded_points(family, eta, theta, cands, n)
}
