use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use yb_theta::{theta_char, Characteristic, ThetaParams};

use crate::diffop::{coeff, DiffOp};
use crate::{Result, SklyaninError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Elliptic,
    Trig,
    Rat,
}

impl Family {
    pub const ALL: [Family; 3] = [Self::Elliptic, Self::Trig, Self::Rat];

    pub fn name(self) -> &'static str {
        match self {
            Self::Elliptic => "elliptic",
            Self::Trig => "trig",
            Self::Rat => "rat",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown family '{s}'"))
    }
}

/// Transcription variants of the displayed generators.
///
/// The elliptic `S2` needs an extra factor `-i` for the quadratic relations
/// to hold. The rational `S3` forward coefficient divides by `u` as printed,
/// but only the `2u` reading (matching the backward coefficient) works.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenVariant {
    EllipticPrinted,
    EllipticS2MinusI,
    Trig,
    RatS3Printed,
    RatS3TwoU,
}

impl GenVariant {
    pub fn name(self) -> &'static str {
        match self {
            Self::EllipticPrinted => "printed",
            Self::EllipticS2MinusI => "s2_times_minus_i",
            Self::Trig => "printed",
            Self::RatS3Printed => "printed_u",
            Self::RatS3TwoU => "two_u",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Self::EllipticPrinted | Self::EllipticS2MinusI => Family::Elliptic,
            Self::Trig => Family::Trig,
            Self::RatS3Printed | Self::RatS3TwoU => Family::Rat,
        }
    }

    /// Every declared variant for a family, printed form first.
    pub fn all_for(family: Family) -> &'static [GenVariant] {
        match family {
            Family::Elliptic => &[Self::EllipticPrinted, Self::EllipticS2MinusI],
            Family::Trig => &[Self::Trig],
            Family::Rat => &[Self::RatS3Printed, Self::RatS3TwoU],
        }
    }

    /// The variant selected by the residual search.
    pub fn selected(family: Family) -> GenVariant {
        match family {
            Family::Elliptic => Self::EllipticS2MinusI,
            Family::Trig => Self::Trig,
            Family::Rat => Self::RatS3TwoU,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub family: Family,
    pub s: C64,
    pub eta: C64,
    pub theta: Option<ThetaParams>,
    pub ops: [DiffOp; 4],
    pub variant: GenVariant,
}

impl GeneratorSet {
    /// All four generators replaced by the zero operator.
    pub fn zeroed(&self) -> Self {
        let z = DiffOp::zero(self.eta);
        Self { ops: [z.clone(), z.clone(), z.clone(), z], ..self.clone() }
    }

    /// Copy with generator `i` replaced by zero.
    pub fn with_zero(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.ops[i] = DiffOp::zero(self.eta);
        out
    }

    /// `θ` parameters, present for the elliptic family.
    pub fn theta_params(&self) -> Result<ThetaParams> {
        self.theta.ok_or(SklyaninError::MissingTau)
    }
}

/// Generators in the selected variant.
pub fn build_generators(family: Family, s: C64, eta: C64, tau: Option<C64>) -> Result<GeneratorSet> {
    let theta = tau.map(ThetaParams::new).transpose()?;
    build_generators_with(GenVariant::selected(family), s, eta, theta)
}

pub fn build_generators_with(
    variant: GenVariant,
    s: C64,
    eta: C64,
    theta: Option<ThetaParams>,
) -> Result<GeneratorSet> {
    let family = variant.family();
    let ops = match variant {
        GenVariant::EllipticPrinted | GenVariant::EllipticS2MinusI => {
            let p = theta.ok_or(SklyaninError::MissingTau)?;
            elliptic(s, eta, &p, variant == GenVariant::EllipticS2MinusI)
        }
        GenVariant::Trig => trig(s, eta),
        GenVariant::RatS3Printed => rational(s, eta, 1.0),
        GenVariant::RatS3TwoU => rational(s, eta, 2.0),
    };
    Ok(GeneratorSet { family, s, eta, theta, ops, variant })
}

/// Evaluate a theta value inside a coefficient closure; a series failure
/// surfaces as NaN, which every residual reports as infinite.
fn th(ch: Characteristic, u: C64, p: &ThetaParams) -> C64 {
    theta_char(ch, u, p).unwrap_or(C64::new(f64::NAN, f64::NAN))
}

fn elliptic(s: C64, eta: C64, p: &ThetaParams, s2_minus_i: bool) -> [DiffOp; 4] {
    use Characteristic::*;
    let chars = [T11, T01, T00, T10];
    let mut ops: Vec<DiffOp> = Vec::with_capacity(4);
    for (a, ch) in chars.into_iter().enumerate() {
        let extra = if a == 2 && s2_minus_i { -C64::i() } else { C64::new(1.0, 0.0) };
        let pref = extra * th(ch, eta, p);
        let p = *p;
        let fwd = coeff(move |u| pref * th(ch, u * 2.0 - s * eta * 2.0, &p) / th(T11, u * 2.0, &p));
        let bwd = coeff(move |u| -pref * th(ch, -u * 2.0 - s * eta * 2.0, &p) / th(T11, u * 2.0, &p));
        ops.push(DiffOp::from_terms(eta, [(1, fwd), (-1, bwd)]));
    }
    ops.try_into().expect("four generators")
}

fn trig(s: C64, eta: C64) -> [DiffOp; 4] {
    let cos = |z: C64| (z * PI).cos();
    let sin2 = |u: C64| (u * 2.0 * PI).sin();
    let se = s * eta;
    let s0 = DiffOp::from_terms(
        eta,
        [
            (1, coeff(move |u| (-cos(u * 2.0 - eta - se * 2.0) + cos(u * 2.0 + eta - se * 2.0)) / sin2(u))),
            (-1, coeff(move |u| (cos(eta + u * 2.0 + se * 2.0) - cos(-eta + u * 2.0 + se * 2.0)) / sin2(u))),
        ],
    );
    let s1 = DiffOp::from_terms(
        eta,
        [
            (-1, coeff(move |u| (1.0 - cos(eta * 2.0) * 2.0 - cos((u + se) * 4.0) * 2.0) / (sin2(u) * 2.0))),
            (1, coeff(move |u| -(1.0 - cos(eta * 2.0) * 2.0 - cos((-u + se) * 4.0) * 2.0) / (sin2(u) * 2.0))),
        ],
    );
    let i = C64::i();
    let s2 = DiffOp::from_terms(
        eta,
        [
            (-1, coeff(move |u| i * (cos(eta * 2.0) * 2.0 + cos((u + se) * 4.0) * 2.0 + 1.0) / (sin2(u) * 2.0))),
            (1, coeff(move |u| -i * (cos(eta * 2.0) * 2.0 + cos((-u + se) * 4.0) * 2.0 + 1.0) / (sin2(u) * 2.0))),
        ],
    );
    let s3 = DiffOp::from_terms(
        eta,
        [
            (-1, coeff(move |u| -(cos(-eta + u * 2.0 + se * 2.0) + cos(eta + u * 2.0 + se * 2.0)) / sin2(u))),
            (1, coeff(move |u| (cos(-eta - u * 2.0 + se * 2.0) + cos(eta - u * 2.0 + se * 2.0)) / sin2(u))),
        ],
    );
    [s0, s1, s2, s3]
}

fn rational(s: C64, e: C64, s3_den: f64) -> [DiffOp; 4] {
    let i = C64::i();
    let (e2, e3, e4) = (e * e, e * e * e, e * e * e * e);
    let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
    let s0 = DiffOp::from_terms(
        e,
        [
            (-1, coeff(move |u| (-u * e * 2.0 - s * e2 * 2.0) / u)),
            (1, coeff(move |u| (-u * e * 2.0 + s * e2 * 2.0) / u)),
        ],
    );
    let s1 = DiffOp::from_terms(
        e,
        [
            (
                -1,
                coeff(move |u| {
                    (s2 * e4 * 8.0 - u.powi(3) * s * e * 64.0 + u * s * e3 * 16.0 - u * s3 * e3 * 64.0
                        - u * u * s2 * e2 * 96.0
                        - e4
                        + u * u * e2 * 8.0
                        - u.powi(4) * 16.0
                        - s4 * e4 * 16.0
                        + 1.0)
                        / (u * 4.0)
                }),
            ),
            (
                1,
                coeff(move |u| {
                    (s4 * e4 * 16.0 + e4 - u.powi(3) * s * e * 64.0 + u.powi(4) * 16.0 - u * s3 * e3 * 64.0
                        + u * u * s2 * e2 * 96.0
                        - 1.0
                        - s2 * e4 * 8.0
                        - u * u * e2 * 8.0
                        + u * s * e3 * 16.0)
                        / (u * 4.0)
                }),
            ),
        ],
    );
    let s2op = DiffOp::from_terms(
        e,
        [
            (
                -1,
                coeff(move |u| {
                    i * (-s2 * e4 * 8.0 + 1.0 + s3 * e3 * u * 64.0 - s * e3 * u * 16.0 + s4 * e4 * 16.0 + e4
                        + u * u * s2 * e2 * 96.0
                        - u * u * e2 * 8.0
                        + u.powi(3) * s * e * 64.0
                        + u.powi(4) * 16.0)
                        / (u * 4.0)
                }),
            ),
            (
                1,
                coeff(move |u| {
                    i * (s3 * e3 * u * 64.0 + u * u * e2 * 8.0 - u * u * s2 * e2 * 96.0 - s * e3 * u * 16.0
                        + s2 * e4 * 8.0
                        - e4
                        + u.powi(3) * s * e * 64.0
                        - s4 * e4 * 16.0
                        - 1.0
                        - u.powi(4) * 16.0)
                        / (u * 4.0)
                }),
            ),
        ],
    );
    let s3op = DiffOp::from_terms(
        e,
        [
            (-1, coeff(move |u| (e2 + u * u * 4.0 + u * s * e * 8.0 + s2 * e2 * 4.0) / (u * 2.0))),
            (1, coeff(move |u| (-u * u * 4.0 + u * s * e * 8.0 - e2 - s2 * e2 * 4.0) / (u * s3_den))),
        ],
    );
    [s0, s1, s2op, s3op]
}

/// `|θ11(1/2)|`, the size of `θ11` along the real period.
fn elliptic_scale(p: &ThetaParams) -> f64 {
    th(Characteristic::T11, C64::new(0.5, 0.0), p).norm()
}

/// Pole guard for a sample point `u` and its translates by `±η`, `±2η`.
pub fn point_guard_ok(family: Family, u: C64, eta: C64, theta: Option<&ThetaParams>) -> bool {
    (-2..=2).all(|k| {
        let w = u + eta * k as f64;
        match family {
            Family::Trig => (w * 2.0 * PI).sin().norm() > 0.1,
            Family::Rat => w.norm() > 0.1,
            Family::Elliptic => theta
                .map(|p| th(Characteristic::T11, w * 2.0, p).norm() > 0.05 * elliptic_scale(p))
                .unwrap_or(false),
        }
    })
}
