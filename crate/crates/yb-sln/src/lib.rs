//! Belavin's elliptic R-matrix for sl(N), its singular gauge matrices, and
//! numerical trigonometric and rational degenerations.
//!
//! Flat index convention: `(i, j)` on `C^N ⊗ C^N` sits at `(i−1)N + (j−1)`.

mod reference;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;
use yb_linalg::{kron, max_rel_residual, permutation_op, qybe_residual, CheckReport, LinalgError, Matrix, VariantChoice};
use yb_theta::{theta_sln, theta_sln_peak, ThetaError, ThetaParams};

pub use reference::{reference_n3, RefKind};

pub const MAX_N: usize = 15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlnError {
    #[error("N = {0} outside 2..=15")]
    InvalidN(usize),
    #[error("pole guard: {0}")]
    PoleGuard(String),
    #[error("limit sequence must be nonempty, nonzero and strictly decreasing in modulus")]
    NonMonotone,
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, SlnError>;

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return Err(SlnError::InvalidN(n));
    }
    Ok(())
}

fn modn(k: i64, n: usize) -> i64 {
    k.rem_euclid(n as i64)
}

const POLE_REL: f64 = 1e-13;

/// Belavin's R-matrix.
///
/// The displayed sum puts
/// `θ^(i'−j')(u+2η) θ^(0)(u) / (θ^(i'−i)(2η) θ^(i−j')(u))` at row
/// `(i, j)`, column `(i', j')` whenever `i + j ≡ i' + j' (mod N)`. The
/// returned matrix is `P Mᵀ P` of that array, the layout that matches the
/// explicit N = 3 degenerations.
pub fn belavin_r(n: usize, u: C64, eta: C64, p: &ThetaParams) -> Result<Matrix> {
    check_n(n)?;
    let th = |j: i64, z: C64| theta_sln(j, z, n, p);
    let t0 = th(0, u)?;
    let num: Vec<C64> = (0..n as i64).map(|k| th(k, u + eta * 2.0)).collect::<std::result::Result<_, _>>()?;
    let den_eta: Vec<C64> = (0..n as i64).map(|k| th(k, eta * 2.0)).collect::<std::result::Result<_, _>>()?;
    let den_u: Vec<C64> = (0..n as i64).map(|k| th(k, u)).collect::<std::result::Result<_, _>>()?;
    // Relative to each series' largest term: at modulus N·tau the values are
    // tiny for large N even far from any zero.
    for (k, (a, b)) in den_eta.iter().zip(&den_u).enumerate() {
        if !(a.norm() >= POLE_REL * theta_sln_peak(k as i64, eta * 2.0, n, p)) {
            return Err(SlnError::PoleGuard(format!("theta^({k})(2 eta) = 0")));
        }
        if !(b.norm() >= POLE_REL * theta_sln_peak(k as i64, u, n, p)) {
            return Err(SlnError::PoleGuard(format!("theta^({k})(u) = 0")));
        }
    }
    let nn = n * n;
    let mut m = Matrix::zeros(nn, nn);
    for i in 1..=n as i64 {
        for j in 1..=n as i64 {
            for ip in 1..=n as i64 {
                for jp in 1..=n as i64 {
                    if modn(i + j - ip - jp, n) != 0 {
                        continue;
                    }
                    let v = num[modn(ip - jp, n) as usize] * t0
                        / (den_eta[modn(ip - i, n) as usize] * den_u[modn(i - jp, n) as usize]);
                    let row = (i - 1) as usize * n + (j - 1) as usize;
                    let col = (ip - 1) as usize * n + (jp - 1) as usize;
                    m[(row, col)] = v;
                }
            }
        }
    }
    let pm = permutation_op(n)?;
    Ok(&(&pm * &m.transpose()) * &pm)
}

/// Exponents `e_i = −(N/2 (i²/N² − i/N) + (N²−1)/(12N))` of `G^t = diag(q^{e_i})`.
pub fn trig_exponents(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n)
        .map(|i| {
            let i = i as f64;
            -(nf / 2.0 * (i * i / (nf * nf) - i / nf) + (nf * nf - 1.0) / (12.0 * nf))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeKindN {
    Trig,
    Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeMatrixN {
    pub n: usize,
    pub kind: GaugeKindN,
    pub m: Matrix,
    /// Inverse assembled factor by factor, so that conjugation stays accurate
    /// when the diagonal spans many orders of magnitude.
    pub inv: Matrix,
    pub limit_param: C64,
}

/// `G^t = diag(exp(2πiτ e_i))`.
pub fn gauge_trig_n(n: usize, tau: C64) -> Result<GaugeMatrixN> {
    check_n(n)?;
    let d: Vec<C64> = trig_exponents(n).iter().map(|&e| (C64::i() * 2.0 * PI * tau * e).exp()).collect();
    let q = (C64::i() * 2.0 * PI * tau).exp();
    let inv = Matrix::diag(&d.iter().map(|z| z.inv()).collect::<Vec<_>>());
    Ok(GaugeMatrixN { n, kind: GaugeKindN::Trig, m: Matrix::diag(&d), inv, limit_param: q })
}

/// The constant factor `B` of `G^r`: rows `i < N` hold `(i−1)!/((i−j)!(j−1)!)`
/// for `j ≤ i`, the last row holds `N!/(j!(N−j)!)`.
pub fn b_matrix(n: usize) -> Matrix {
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    Matrix::from_fn(n, n, |r, c| {
        let (i, j) = (r + 1, c + 1);
        let v = if i < n {
            if j <= i {
                fact(i - 1) / (fact(i - j) * fact(j - 1))
            } else {
                0.0
            }
        } else {
            fact(n) / (fact(j) * fact(n - j))
        };
        C64::new(v, 0.0)
    })
}

/// Which diagonal exponents to use in `G^r = D·B`, `D = diag(x^{e_i})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatExponents {
    /// `b_i = −N(N−1)/(2N) + (1−(i−1))/N` as displayed.
    Printed,
    /// `e = −(0, 1, …, N−2, N)`, the exponents that reproduce the N = 3 display.
    Corrected,
}

impl RatExponents {
    pub fn name(self) -> &'static str {
        match self {
            Self::Printed => "printed",
            Self::Corrected => "corrected",
        }
    }
}

pub fn rat_exponents(n: usize, kind: RatExponents) -> Vec<f64> {
    let nf = n as f64;
    match kind {
        RatExponents::Printed => {
            (1..=n).map(|i| -nf * (nf - 1.0) / (2.0 * nf) + (1.0 - (i as f64 - 1.0)) / nf).collect()
        }
        RatExponents::Corrected => (0..n).map(|i| if i + 1 == n { -nf } else { -(i as f64) }).collect(),
    }
}

/// `G^r(x) = D(x)·B`.
pub fn gauge_rat_n(n: usize, x: C64, kind: RatExponents) -> Result<GaugeMatrixN> {
    check_n(n)?;
    if x.norm() == 0.0 {
        return Err(SlnError::PoleGuard("x = 0".into()));
    }
    let d: Vec<C64> = rat_exponents(n, kind).iter().map(|&e| x.powf(e)).collect();
    let b = b_matrix(n);
    let m = &Matrix::diag(&d) * &b;
    let inv = &b.inverse()? * &Matrix::diag(&d.iter().map(|z| z.inv()).collect::<Vec<_>>());
    Ok(GaugeMatrixN { n, kind: GaugeKindN::Rat, m, inv, limit_param: x })
}

fn conj(r: &Matrix, g: &GaugeMatrixN) -> Result<Matrix> {
    Ok(&(&kron(&g.m, &g.m)? * r) * &kron(&g.inv, &g.inv)?)
}

/// `(G^t⊗G^t) R (G^t⊗G^t)^{-1}` at nome `q`, before normalisation.
fn trig_conjugated(n: usize, u: C64, eta: C64, q: f64) -> Result<Matrix> {
    let tau = yb_theta::tau_from_nome(q);
    let p = ThetaParams::new(tau)?;
    conj(&belavin_r(n, u, eta, &p)?, &gauge_trig_n(n, tau)?)
}

/// The trigonometric limit estimate `sin(2πη)·(G⊗G) R (G⊗G)^{-1}` at `q`.
pub fn trig_limit_at(n: usize, u: C64, eta: C64, q: f64) -> Result<Matrix> {
    Ok(trig_conjugated(n, u, eta, q)?.scale((eta * 2.0 * PI).sin()))
}

/// Nome at which the trigonometric parent of the rational limit is taken.
pub const RAT_PARENT_Q: f64 = 1e-16;
/// Contour points per radius in the rational limit.
pub const RAT_CONTOUR_POINTS: usize = 24;

/// Trigonometric parent with `π → x`: the trig limit at the rescaled
/// arguments `(xu/π, xη/π)` divided by `sin(2xη)`.
fn rat_parent(n: usize, u: C64, eta: C64, x: C64) -> Result<Matrix> {
    trig_conjugated(n, x * u / PI, x * eta / PI, RAT_PARENT_Q)
}

/// Mean of `(G^r⊗G^r) parent (G^r⊗G^r)^{-1}` over `points` nodes on `|x| = r`,
/// the constant Laurent coefficient in `x`.
pub fn rat_limit_contour(n: usize, u: C64, eta: C64, radius: f64, points: usize) -> Result<Matrix> {
    let nn = n * n;
    let mut acc = Matrix::zeros(nn, nn);
    for k in 0..points {
        let x = C64::from_polar(radius, 2.0 * PI * (k as f64 + 0.5) / points as f64);
        let g = gauge_rat_n(n, x, RatExponents::Corrected)?;
        acc = &acc + &conj(&rat_parent(n, u, eta, x)?, &g)?;
    }
    Ok(acc.scale(C64::new(1.0 / points as f64, 0.0)))
}

/// Real-axis evaluation with a chosen exponent set, for the variant report.
pub fn rat_limit_real(n: usize, u: C64, eta: C64, x: f64, kind: RatExponents) -> Result<Matrix> {
    let x = C64::new(x, 0.0);
    conj(&rat_parent(n, u, eta, x)?, &gauge_rat_n(n, x, kind)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetN {
    Trig,
    Rat,
}

impl TargetN {
    pub fn name(self) -> &'static str {
        match self {
            Self::Trig => "trig",
            Self::Rat => "rat",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegenerationN {
    pub target: TargetN,
    pub n: usize,
    /// `q` values (trig) or contour radii (rat).
    pub limit_values: Vec<f64>,
    /// Distance to the N = 3 display per limit value, or between consecutive
    /// values for other `N`.
    pub residuals: Vec<f64>,
    pub against_reference: bool,
    pub final_matrix: Matrix,
}

impl DegenerationN {
    pub fn strictly_decreasing(&self) -> bool {
        self.residuals.windows(2).all(|w| w[1] < w[0])
    }

    /// Strictly decreasing until the residuals reach [`ROUNDOFF_FLOOR`];
    /// steps that are both below it count as converged. A curve that stalls
    /// or grows above the floor is divergent.
    pub fn converging(&self) -> bool {
        self.residuals.windows(2).all(|w| w[1] < w[0] || w[0].max(w[1]) <= ROUNDOFF_FLOOR)
    }

    pub fn last(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(f64::INFINITY)
    }
}

pub const DEFAULT_TRIG_QS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];
/// Contour radii, below the parent's first pole at `|x| = π/(2|η|)`.
pub const DEFAULT_RAT_RADII: [f64; 3] = [4.0, 3.0, 2.0];
/// Relative residual below which a limit curve is at double-precision noise.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Limit along `sequence` with a residual curve.
pub fn degenerate_n(target: TargetN, n: usize, u: C64, eta: C64, sequence: &[f64]) -> Result<DegenerationN> {
    check_n(n)?;
    if sequence.is_empty() || sequence.iter().any(|&x| !(x > 0.0)) || sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(SlnError::NonMonotone);
    }
    let mats: Vec<Matrix> = sequence
        .iter()
        .map(|&s| match target {
            TargetN::Trig => trig_limit_at(n, u, eta, s),
            TargetN::Rat => rat_limit_contour(n, u, eta, s, RAT_CONTOUR_POINTS),
        })
        .collect::<Result<_>>()?;
    let reference = if n == 3 {
        Some(reference_n3(
            match target {
                TargetN::Trig => RefKind::Trig,
                TargetN::Rat => RefKind::Rat,
            },
            u,
            eta,
        )?)
    } else {
        None
    };
    let residuals = match &reference {
        Some(r) => mats.iter().map(|m| Ok(max_rel_residual(m, r)?.value)).collect::<Result<Vec<_>>>()?,
        None => mats.windows(2).map(|w| Ok(max_rel_residual(&w[1], &w[0])?.value)).collect::<Result<Vec<_>>>()?,
    };
    Ok(DegenerationN {
        target,
        n,
        limit_values: sequence.to_vec(),
        residuals,
        against_reference: reference.is_some(),
        final_matrix: mats.into_iter().last().expect("nonempty"),
    })
}

/// QYBE residual of an `N²×N²` matrix function at `(u, v)`.
pub fn qybe_residual_fn(r: impl Fn(C64) -> Result<Matrix>, u: C64, v: C64) -> Result<f64> {
    Ok(qybe_residual(&r(u - v)?, &r(u)?, &r(v)?)?.value)
}

/// Real `x` values used to compare exponent sets in the rational limit.
pub const RAT_VARIANT_XS: [f64; 3] = [0.3, 0.1, 0.03];

/// Distance of each exponent set's real-axis evaluation to `limit`, best over
/// [`RAT_VARIANT_XS`].
pub fn rat_exponent_variants(n: usize, u: C64, eta: C64, limit: &Matrix) -> Result<VariantChoice> {
    let mut out = Vec::new();
    for kind in [RatExponents::Printed, RatExponents::Corrected] {
        let mut best = f64::INFINITY;
        for &x in &RAT_VARIANT_XS {
            best = best.min(max_rel_residual(&rat_limit_real(n, u, eta, x, kind)?, limit)?.value);
        }
        out.push((kind.name().to_string(), best));
    }
    Ok(VariantChoice::select(out))
}

/// Degeneration report: residual curve, monotonicity, and QYBE of the limit
/// at `(u, v)`.
pub fn degeneration_check_n(target: TargetN, n: usize, u: C64, v: C64, eta: C64, sequence: &[f64]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("degenerate-slN", 1e-5);
    rep.param("N", n).param("target", target.name());
    let curve = degenerate_n(target, n, u, eta, sequence)?;
    let stage = |w: C64| -> Result<Matrix> {
        let last = *sequence.last().expect("nonempty");
        match target {
            TargetN::Trig => trig_limit_at(n, w, eta, last),
            TargetN::Rat => rat_limit_contour(n, w, eta, last, RAT_CONTOUR_POINTS),
        }
    };
    for (k, r) in curve.residuals.iter().enumerate() {
        rep.diagnostic(format!("curve/{k}"), *r);
    }
    rep.residual(if curve.against_reference { "limit/reference" } else { "limit/self" }, curve.last());
    rep.condition("limit/decreasing", curve.converging());
    rep.residual_with_tol("limit/qybe", qybe_residual_fn(stage, u, v)?, 1e-7);
    if target == TargetN::Rat {
        rep.variant("rat_exponents", rat_exponent_variants(n, u, eta, &curve.final_matrix)?);
    }
    Ok(rep)
}
