//! The five sl(2) R-matrix families, the singular gauge matrices that relate
//! them, and numerical degeneration curves.
//!
//! Matrices act on `C² ⊗ C²` with basis order `e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use thiserror::Error;
use yb_linalg::{kron, max_rel_residual, qybe_residual, LinalgError, Matrix, Residual};
use yb_theta::{ell_weights, ThetaError, ThetaParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Sl2Error {
    #[error("pole guard violated: {0}")]
    PoleGuard(String),
    #[error("family {0} needs parameter {1}")]
    MissingParameter(Sl2Family, &'static str),
    #[error("limit sequence must be nonzero and strictly decreasing in modulus")]
    NonMonotone,
    #[error("{0} is not a degeneration target")]
    InvalidTarget(Sl2Family),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, Sl2Error>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sl2Family {
    Elliptic,
    TrigStandard,
    TrigDeformed,
    RatStandard,
    RatDeformed,
}

impl Sl2Family {
    pub const ALL: [Sl2Family; 5] =
        [Self::Elliptic, Self::TrigStandard, Self::TrigDeformed, Self::RatStandard, Self::RatDeformed];

    pub fn name(self) -> &'static str {
        match self {
            Self::Elliptic => "elliptic",
            Self::TrigStandard => "trig_standard",
            Self::TrigDeformed => "trig_deformed",
            Self::RatStandard => "rat_standard",
            Self::RatDeformed => "rat_deformed",
        }
    }
}

impl fmt::Display for Sl2Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sl2Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown sl(2) family '{s}'"))
    }
}

/// Parameters for [`build_r`]. `pi_param` replaces `π` in the two
/// trigonometric families; setting it to a small `x` is the rational-limit
/// recipe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Params {
    pub u: C64,
    pub eta: C64,
    pub tau: Option<C64>,
    pub alpha: C64,
    pub beta: C64,
    pub pi_param: C64,
    pub trunc_tol: f64,
    pub max_terms: usize,
}

impl Sl2Params {
    pub fn new(u: C64, eta: C64) -> Self {
        Self {
            u,
            eta,
            tau: None,
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(1.0, 0.0),
            pi_param: C64::new(PI, 0.0),
            trunc_tol: ThetaParams::DEFAULT_TOL,
            max_terms: ThetaParams::DEFAULT_MAX_TERMS,
        }
    }

    pub fn with_tau(mut self, tau: C64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_alpha(mut self, alpha: C64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_beta(mut self, beta: C64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_pi(mut self, pi_param: C64) -> Self {
        self.pi_param = pi_param;
        self
    }

    pub fn at(mut self, u: C64) -> Self {
        self.u = u;
        self
    }

    pub fn theta_params(&self) -> Result<ThetaParams> {
        let tau = self.tau.ok_or(Sl2Error::MissingParameter(Sl2Family::Elliptic, "tau"))?;
        Ok(ThetaParams::with_truncation(tau, self.trunc_tol, self.max_terms)?)
    }

    /// Sampling guard: `|u| > 0.05`, `|u ± 2η| > 0.05`, `|sin(x u)| > 0.05`.
    pub fn guard_ok(&self) -> bool {
        let two_eta = self.eta * 2.0;
        self.u.norm() > 0.05
            && (self.u + two_eta).norm() > 0.05
            && (self.u - two_eta).norm() > 0.05
            && (self.pi_param * self.u).sin().norm() > 0.05
    }
}

/// Pauli matrices `σ0..σ3`.
pub fn pauli(a: usize) -> Matrix {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::i();
    let rows = match a {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        3 => [[o, z], [z, -o]],
        _ => panic!("Pauli index {a} out of range"),
    };
    Matrix::from_fn(2, 2, |r, c| rows[r][c])
}

pub fn build_r(family: Sl2Family, p: &Sl2Params) -> Result<Matrix> {
    match family {
        Sl2Family::Elliptic => elliptic(p),
        Sl2Family::TrigStandard => trig(p, None),
        Sl2Family::TrigDeformed => trig(p, Some(p.alpha)),
        Sl2Family::RatStandard => rational(p, None),
        Sl2Family::RatDeformed => rational(p, Some(p.beta)),
    }
}

fn elliptic(p: &Sl2Params) -> Result<Matrix> {
    let tp = p.theta_params()?;
    let w = ell_weights(p.u + p.eta, p.eta, &tp)?;
    let mut r = Matrix::zeros(4, 4);
    for (a, wa) in w.into_iter().enumerate() {
        let s = pauli(a);
        r = &r + &kron(&s, &s)?.scale(wa);
    }
    Ok(r)
}

fn trig(p: &Sl2Params, alpha: Option<C64>) -> Result<Matrix> {
    let x = p.pi_param;
    let d = (x * p.eta * 2.0).sin();
    if d.norm() < 1e-12 {
        return Err(Sl2Error::PoleGuard(format!("sin(2·x·eta) = {d} vanishes")));
    }
    let a = (x * (p.u + p.eta * 2.0)).sin() / d;
    let b = (x * p.u).sin() / d;
    let o = C64::new(1.0, 0.0);
    let mut r = Matrix::zeros(4, 4);
    r[(0, 0)] = a;
    r[(1, 1)] = b;
    r[(1, 2)] = o;
    r[(2, 1)] = o;
    r[(2, 2)] = b;
    r[(3, 3)] = a;
    if let Some(al) = alpha {
        // 4α² sin(xu) sin(2xη) sin(x(u+2η)) / sin(2xη), cancelled by hand.
        r[(3, 0)] = al * al * 4.0 * (x * p.u).sin() * (x * (p.u + p.eta * 2.0)).sin();
    }
    Ok(r)
}

fn rational(p: &Sl2Params, beta: Option<C64>) -> Result<Matrix> {
    let (u, eta) = (p.u, p.eta);
    if eta.norm() < 1e-14 {
        return Err(Sl2Error::PoleGuard("2·eta vanishes".into()));
    }
    let two_eta = eta * 2.0;
    let a = (u + two_eta) / two_eta;
    let b = u / two_eta;
    let o = C64::new(1.0, 0.0);
    let mut r = Matrix::zeros(4, 4);
    r[(0, 0)] = a;
    r[(1, 1)] = b;
    r[(1, 2)] = o;
    r[(2, 1)] = o;
    r[(2, 2)] = b;
    r[(3, 3)] = a;
    if let Some(be) = beta {
        let w = u * (u + two_eta) * be;
        r[(1, 0)] = -w;
        r[(2, 0)] = -w;
        r[(3, 1)] = w;
        r[(3, 2)] = w;
        r[(3, 0)] = -u * be * be * (u + two_eta) * (eta * eta * 4.0 + u * eta * 2.0 + u * u);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeKind {
    TrigSingular,
    RatSingular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeMatrix {
    pub m: Matrix,
    pub kind: GaugeKind,
    /// `q` for the trigonometric kind, `x` for the rational kind.
    pub limit_param: C64,
}

fn principal_sqrt(z: C64, what: &str) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Sl2Error::PoleGuard(format!("{what} must be nonzero")));
    }
    Ok(z.sqrt())
}

/// `G^t = diag(q^{1/8} α^{-1/2}, α^{1/2} q^{-1/8})` with `q^{1/8} = e^{2πiτ/8}`.
pub fn gauge_trig(tau: C64, alpha: C64) -> Result<GaugeMatrix> {
    if !(tau.re.is_finite() && tau.im.is_finite()) {
        return Err(Sl2Error::Theta(ThetaError::InvalidTau(tau)));
    }
    let sa = principal_sqrt(alpha, "alpha")?;
    let q8 = (C64::i() * 2.0 * PI * tau / 8.0).exp();
    let m = Matrix::diag(&[q8 / sa, sa / q8]);
    Ok(GaugeMatrix { m, kind: GaugeKind::TrigSingular, limit_param: q8.powi(8) })
}

/// `G^r = [[x α^{1/2} β^{-1/2}, 0], [2 α^{1/2} β^{1/2} / x, β^{1/2} α^{-1/2} / x]]`.
pub fn gauge_rat(x: C64, alpha: C64, beta: C64) -> Result<GaugeMatrix> {
    if x.norm() == 0.0 {
        return Err(Sl2Error::PoleGuard("limit parameter x must be nonzero".into()));
    }
    let sa = principal_sqrt(alpha, "alpha")?;
    let sb = principal_sqrt(beta, "beta")?;
    let z = C64::new(0.0, 0.0);
    let rows = [[x * sa / sb, z], [sa * sb * 2.0 / x, sb / (sa * x)]];
    let m = Matrix::from_fn(2, 2, |r, c| rows[r][c]);
    Ok(GaugeMatrix { m, kind: GaugeKind::RatSingular, limit_param: x })
}

/// Dispatch on kind; a trigonometric `q` is converted to `τ = ln q / (2πi)`.
pub fn gauge_matrix(kind: GaugeKind, limit_param: C64, alpha: C64, beta: C64) -> Result<GaugeMatrix> {
    if limit_param.norm() == 0.0 {
        return Err(Sl2Error::PoleGuard("limit parameter must be nonzero".into()));
    }
    match kind {
        GaugeKind::TrigSingular => gauge_trig(tau_from_q(limit_param), alpha),
        GaugeKind::RatSingular => gauge_rat(limit_param, alpha, beta),
    }
}

/// Principal `τ` with `e^{2πiτ} = q`.
pub fn tau_from_q(q: C64) -> C64 {
    q.ln() / (C64::i() * 2.0 * PI)
}

/// `(G⊗G) R (G⊗G)^{-1}`.
pub fn gauge_conjugate(r: &Matrix, g: &Matrix) -> Result<Matrix> {
    let a = kron(g, g)?;
    Ok(r.conjugate_by(&a)?)
}

/// QYBE residual of `family` at spectral arguments `(u, v)`; `p.u` is ignored.
pub fn qybe_residual_family(family: Sl2Family, p: &Sl2Params, u: C64, v: C64) -> Result<Residual> {
    let r_uv = build_r(family, &p.at(u - v))?;
    let r_u = build_r(family, &p.at(u))?;
    let r_v = build_r(family, &p.at(v))?;
    Ok(qybe_residual(&r_uv, &r_u, &r_v)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegenerationCurve {
    pub target: Sl2Family,
    pub limit_values: Vec<C64>,
    pub residuals: Vec<f64>,
    /// Gauge-conjugated parent at the last limit value.
    pub final_matrix: Matrix,
}

impl DegenerationCurve {
    pub fn strictly_decreasing(&self) -> bool {
        self.residuals.windows(2).all(|w| w[1] < w[0])
    }

    pub fn last(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::INFINITY)
    }
}

/// Residuals between the gauge-conjugated parent at each limit value and the
/// closed-form `target`.
///
/// Trigonometric targets take `q` values and the elliptic parent
/// (`½ (G^t⊗G^t) R^e (G^t⊗G^t)^{-1}`, identity gauge for the standard
/// target). Rational targets take `x` values and the trigonometric parent
/// with `π → x`, conjugated by `G^r` (identity for the standard target).
pub fn degeneration_residual_curve(
    target: Sl2Family,
    p: &Sl2Params,
    sequence: &[C64],
) -> Result<DegenerationCurve> {
    if target == Sl2Family::Elliptic {
        return Err(Sl2Error::InvalidTarget(target));
    }
    if sequence.is_empty()
        || sequence.iter().any(|z| z.norm() == 0.0)
        || sequence.windows(2).any(|w| !(w[1].norm() < w[0].norm()))
    {
        return Err(Sl2Error::NonMonotone);
    }
    let closed = build_r(target, &p.with_pi(C64::new(PI, 0.0)))?;
    let mut residuals = Vec::with_capacity(sequence.len());
    let mut last = None;
    for &lim in sequence {
        let m = match target {
            Sl2Family::TrigDeformed | Sl2Family::TrigStandard => {
                let tau = tau_from_q(lim);
                let parent = build_r(Sl2Family::Elliptic, &p.with_tau(tau))?.scale(C64::new(0.5, 0.0));
                if target == Sl2Family::TrigDeformed {
                    gauge_conjugate(&parent, &gauge_trig(tau, p.alpha)?.m)?
                } else {
                    parent
                }
            }
            Sl2Family::RatDeformed => {
                let parent = build_r(Sl2Family::TrigDeformed, &p.with_pi(lim))?;
                gauge_conjugate(&parent, &gauge_rat(lim, p.alpha, p.beta)?.m)?
            }
            Sl2Family::RatStandard => build_r(Sl2Family::TrigStandard, &p.with_pi(lim))?,
            Sl2Family::Elliptic => unreachable!("rejected above"),
        };
        residuals.push(max_rel_residual(&m, &closed)?.value);
        last = Some(m);
    }
    Ok(DegenerationCurve {
        target,
        limit_values: sequence.to_vec(),
        residuals,
        final_matrix: last.expect("nonempty sequence"),
    })
}
