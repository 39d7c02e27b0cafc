//! Lower-triangular twists `Q(u)` turning the standard degenerate R-matrices
//! into the deformed ones: `R̃(u) = Q(u) R(u) Q(u)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;
use yb_linalg::{max_rel_residual, permutation_op, CheckReport, LinalgError, Matrix};
use yb_sl2::{build_r, Sl2Error, Sl2Family, Sl2Params};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwistError {
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, TwistError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistKind {
    Trig,
    Rat,
}

impl TwistKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Trig => "trig",
            Self::Rat => "rat",
        }
    }

    /// `(standard, deformed)` R-matrix families related by this twist.
    pub fn families(self) -> (Sl2Family, Sl2Family) {
        match self {
            Self::Trig => (Sl2Family::TrigStandard, Sl2Family::TrigDeformed),
            Self::Rat => (Sl2Family::RatStandard, Sl2Family::RatDeformed),
        }
    }
}

/// How to read the undefined symbol in the `(4,2)`, `(4,3)` entries of `Q^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HReading {
    Eta,
    U,
    One,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwistMatrix {
    pub m: Matrix,
    pub kind: TwistKind,
    pub u: C64,
    pub eta: C64,
    /// `α` for the trigonometric kind, `β` for the rational kind.
    pub deform: C64,
}

pub fn build_q(kind: TwistKind, u: C64, eta: C64, deform: C64) -> TwistMatrix {
    build_q_reading(kind, u, eta, deform, HReading::Eta)
}

pub fn build_q_reading(kind: TwistKind, u: C64, eta: C64, deform: C64, h: HReading) -> TwistMatrix {
    let mut m = Matrix::identity(4);
    match kind {
        TwistKind::Trig => {
            let a = deform;
            m[(3, 0)] = a * a * 2.0 * (u * PI).sin() * (eta * 2.0 * PI).sin();
        }
        TwistKind::Rat => {
            let b = deform;
            let h = match h {
                HReading::Eta => eta,
                HReading::U => u,
                HReading::One => C64::new(1.0, 0.0),
            };
            m[(1, 0)] = -u * b * eta;
            m[(2, 0)] = -u * b * eta;
            m[(3, 0)] = -(eta * u.powi(3) + eta * eta * u * u + eta.powi(3) * u * 4.0) * b * b;
            m[(3, 1)] = u * b * h;
            m[(3, 2)] = u * b * h;
        }
    }
    TwistMatrix { m, kind, u, eta, deform }
}

/// Residuals of the four twist identities at one point `(u, v)`:
/// `involution`, `p_symmetry`, `conjugation` and `f_form`.
pub fn twist_point_residuals(kind: TwistKind, eta: C64, deform: C64, u: C64, v: C64) -> Result<[(&'static str, f64); 4]> {
    twist_point_residuals_reading(kind, eta, deform, u, v, HReading::Eta)
}

pub fn twist_point_residuals_reading(
    kind: TwistKind,
    eta: C64,
    deform: C64,
    u: C64,
    v: C64,
    h: HReading,
) -> Result<[(&'static str, f64); 4]> {
    let (std_f, def_f) = kind.families();
    let params = |w: C64| {
        let p = Sl2Params::new(w, eta);
        match kind {
            TwistKind::Trig => p.with_alpha(deform),
            TwistKind::Rat => p.with_beta(deform),
        }
    };
    let q = |w: C64| build_q_reading(kind, w, eta, deform, h).m;
    let p = permutation_op(2)?;

    let involution = max_rel_residual(&(&q(u) * &q(-u)), &Matrix::identity(4))?.value;
    let p_symmetry = max_rel_residual(&(&(&p * &q(u)) * &p), &q(u))?.value;

    let r = build_r(std_f, &params(u))?;
    let rt = build_r(def_f, &params(u))?;
    let conjugation = max_rel_residual(&rt, &(&(&q(u) * &r) * &q(u)))?.value;

    // R̃(u-v) F21(v,u) = F12(u,v) R(u-v) with F12(u,v) = Q(u-v), F21 = P F12 P.
    let w = u - v;
    let f12 = q(w);
    let f21 = &(&p * &q(v - u)) * &p;
    let lhs = &build_r(def_f, &params(w))? * &f21;
    let rhs = &f12 * &build_r(std_f, &params(w))?;
    let f_form = max_rel_residual(&lhs, &rhs)?.value;

    Ok([
        ("involution", involution),
        ("p_symmetry", p_symmetry),
        ("conjugation", conjugation),
        ("f_form", f_form),
    ])
}

/// Maximum of each residual class over the sample, as a report with
/// tolerance `1e-11`.
pub fn twist_residuals(kind: TwistKind, eta: C64, deform: C64, sample: &[(C64, C64)]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("twist", 1e-11);
    for &(u, v) in sample {
        for (name, val) in twist_point_residuals(kind, eta, deform, u, v)? {
            rep.residual(format!("{}/{name}", kind.name()), val);
        }
    }
    Ok(rep)
}
