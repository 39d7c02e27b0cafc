//! Theta functions with half-integer characteristics, the sl(N) thetas
//! `θ^(j)`, and the elliptic weights `W_a`.
//!
//! Convention:
//!
//! ```text
//! θ[a,b](u | τ) = Σ_m exp(πiτ(m+a)² + 2πi(m+a)(u+b)),   q = e^{2πiτ}
//! ```
//!
//! Fractional powers of `q` are always taken as `exp(2πiτ·k)` so the branch
//! follows `τ` continuously.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("modular parameter must have Im(tau) > 0, got {0}")]
    InvalidTau(C64),
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("series did not reach the cutoff within {0} terms")]
    NotConverged(usize),
    #[error("vanishing denominator {0} at eta = {1}")]
    VanishingDenominator(&'static str, C64),
}

pub type Result<T> = std::result::Result<T, ThetaError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    tau: C64,
    trunc_tol: f64,
    max_terms: usize,
}

impl ThetaParams {
    pub const DEFAULT_TOL: f64 = 1e-14;
    pub const DEFAULT_MAX_TERMS: usize = 64;

    pub fn new(tau: C64) -> Result<Self> {
        Self::with_truncation(tau, Self::DEFAULT_TOL, Self::DEFAULT_MAX_TERMS)
    }

    pub fn with_truncation(tau: C64, trunc_tol: f64, max_terms: usize) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(ThetaError::InvalidTau(tau));
        }
        if !(trunc_tol > 0.0 && trunc_tol <= 1e-10) {
            return Err(ThetaError::InvalidPolicy(format!("trunc_tol {trunc_tol} outside (0, 1e-10]")));
        }
        if max_terms < 16 {
            return Err(ThetaError::InvalidPolicy(format!("max_terms {max_terms} below 16")));
        }
        Ok(Self { tau, trunc_tol, max_terms })
    }

    /// Purely imaginary `τ` with `e^{2πiτ} = q` for real `0 < q < 1`.
    pub fn from_nome(q: f64) -> Result<Self> {
        Self::new(tau_from_nome(q))
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn trunc_tol(&self) -> f64 {
        self.trunc_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same policy, different `τ`.
    pub fn with_tau(&self, tau: C64) -> Result<Self> {
        Self::with_truncation(tau, self.trunc_tol, self.max_terms)
    }

    pub fn q(&self) -> C64 {
        self.qpow(1.0)
    }

    /// `q^k` computed as `exp(2πiτk)`.
    pub fn qpow(&self, k: f64) -> C64 {
        (C64::i() * 2.0 * PI * self.tau * k).exp()
    }
}

/// `τ = i·ln(1/q)/(2π)`.
pub fn tau_from_nome(q: f64) -> C64 {
    C64::new(0.0, -q.ln() / (2.0 * PI))
}

/// The four half-integer characteristics, named by the label pair `(2a, 2b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Characteristic {
    T11,
    T10,
    T01,
    T00,
}

impl Characteristic {
    pub fn a(self) -> f64 {
        match self {
            Self::T11 | Self::T10 => 0.5,
            Self::T01 | Self::T00 => 0.0,
        }
    }

    pub fn b(self) -> f64 {
        match self {
            Self::T11 | Self::T01 => 0.5,
            Self::T10 | Self::T00 => 0.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::T11 => "theta11",
            Self::T10 => "theta10",
            Self::T01 => "theta01",
            Self::T00 => "theta00",
        }
    }
}

/// Characteristic behind each weight `W_0..W_3`.
pub const WEIGHT_CHARS: [Characteristic; 4] =
    [Characteristic::T11, Characteristic::T01, Characteristic::T00, Characteristic::T10];

/// `Σ_m exp(πiτ(m+a)² + 2πi(m+a)(u+b))` for arbitrary real shifts.
///
/// Summation starts at the dominant term and walks outward in both
/// directions. A direction stops once a term falls below
/// `trunc_tol · max(|partial sum|, largest term)`; the second scale keeps
/// sums that cancel exactly (odd thetas at zero) from running forever.
pub fn theta_series(a: f64, b: f64, u: C64, tau: C64, p: &ThetaParams) -> Result<C64> {
    if !(tau.im > 0.0) {
        return Err(ThetaError::InvalidTau(tau));
    }
    let i_pi = C64::new(0.0, PI);
    let term = |m: i64| {
        let n = m as f64 + a;
        (i_pi * tau * n * n + 2.0 * i_pi * n * (u + b)).exp()
    };
    // Peak of |term| sits at n = -Im(u)/Im(tau).
    let m0 = (-u.im / tau.im - a).round() as i64;
    let first = term(m0);
    let mut sum = first;
    let mut biggest = first.norm();
    for dir in [1i64, -1] {
        let mut m = m0;
        let mut steps = 0;
        loop {
            m += dir;
            steps += 1;
            if steps > p.max_terms {
                return Err(ThetaError::NotConverged(p.max_terms));
            }
            let t = term(m);
            let mag = t.norm();
            if !mag.is_finite() {
                return Err(ThetaError::NotConverged(steps));
            }
            sum += t;
            biggest = biggest.max(mag);
            if mag < p.trunc_tol * sum.norm().max(biggest) {
                break;
            }
        }
    }
    Ok(sum)
}

/// Modulus of the largest term of [`theta_series`], the natural scale for
/// deciding that a theta value is a zero rather than merely small.
pub fn theta_peak(a: f64, u: C64, tau: C64) -> f64 {
    let m0 = (-u.im / tau.im - a).round() as i64;
    (m0 - 1..=m0 + 1)
        .map(|m| {
            let n = m as f64 + a;
            (-PI * tau.im * n * n - 2.0 * PI * n * u.im).exp()
        })
        .fold(0.0, f64::max)
}

/// [`theta_peak`] for [`theta_sln`].
pub fn theta_sln_peak(j: i64, u: C64, n: usize, p: &ThetaParams) -> f64 {
    let nf = n as f64;
    theta_peak(0.5 - j as f64 / nf, u, p.tau * nf)
}

pub fn theta_char(ch: Characteristic, u: C64, p: &ThetaParams) -> Result<C64> {
    theta_series(ch.a(), ch.b(), u, p.tau, p)
}

/// `θ^(j)(u) = Σ_m exp(πiNτ(m+½−j/N)² + 2πi(m+½−j/N)(u+½))`.
pub fn theta_sln(j: i64, u: C64, n: usize, p: &ThetaParams) -> Result<C64> {
    let nf = n as f64;
    theta_series(0.5 - j as f64 / nf, 0.5, u, p.tau * nf, p)
}

/// `W_a(u) = θ_{c(a)}(u) / θ_{c(a)}(η)` with `c` from [`WEIGHT_CHARS`].
pub fn ell_weights(u: C64, eta: C64, p: &ThetaParams) -> Result<[C64; 4]> {
    let mut w = [C64::new(0.0, 0.0); 4];
    for (slot, ch) in w.iter_mut().zip(WEIGHT_CHARS) {
        let den = theta_char(ch, eta, p)?;
        if den.norm() < 1e-13 {
            return Err(ThetaError::VanishingDenominator(ch.label(), eta));
        }
        *slot = theta_char(ch, u, p)? / den;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Characteristic::*;

    fn p_i() -> ThetaParams {
        ThetaParams::new(C64::i()).unwrap()
    }

    #[test]
    fn peak_tracks_size_not_zeros() {
        let p = ThetaParams::from_nome(1e-16).unwrap();
        let z = C64::new(0.3, 0.0);
        let v = theta_sln(0, z, 8, &p).unwrap().norm();
        let peak = theta_sln_peak(0, z, 8, &p);
        assert!(v < 1e-13 && v > 0.5 * peak, "{v} {peak}");
        let zero = theta_sln(0, C64::new(0.0, 0.0), 8, &p).unwrap().norm();
        assert!(zero < 1e-13 * theta_sln_peak(0, C64::new(0.0, 0.0), 8, &p));
    }

    #[test]
    fn odd_theta_vanishes_at_origin() {
        assert!(theta_char(T11, C64::new(0.0, 0.0), &p_i()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn theta00_at_origin() {
        let v = theta_char(T00, C64::new(0.0, 0.0), &p_i()).unwrap();
        let oracle = 1.0 + 2.0 * (-PI).exp() + 2.0 * (-4.0 * PI).exp() + 2.0 * (-9.0 * PI).exp();
        assert!((v - oracle).norm() < 1e-14, "{v}");
        assert!((v.re - 1.08643481).abs() < 1e-8);
    }

    #[test]
    fn theta11_is_odd() {
        let u = C64::new(0.3, 0.1);
        let p = p_i();
        let s = theta_char(T11, u, &p).unwrap() + theta_char(T11, -u, &p).unwrap();
        assert!(s.norm() < 1e-13);
    }

    #[test]
    fn quasi_periodic_in_u() {
        let p = ThetaParams::new(C64::new(0.2, 1.1)).unwrap();
        let u = C64::new(0.27, -0.15);
        for ch in [T11, T10, T01, T00] {
            let lhs = theta_char(ch, u + 1.0, &p).unwrap();
            let rhs = (C64::i() * 2.0 * PI * ch.a()).exp() * theta_char(ch, u, &p).unwrap();
            assert!((lhs - rhs).norm() < 1e-12, "{ch:?}");
        }
    }

    #[test]
    fn rejects_bad_tau_and_policy() {
        assert!(matches!(ThetaParams::new(C64::new(0.0, -1.0)), Err(ThetaError::InvalidTau(_))));
        assert!(ThetaParams::with_truncation(C64::i(), 1e-3, 64).is_err());
        assert!(ThetaParams::with_truncation(C64::i(), 1e-14, 8).is_err());
    }

    #[test]
    fn small_im_tau_hits_term_bound() {
        let p = ThetaParams::with_truncation(C64::new(0.0, 1e-4), 1e-14, 16).unwrap();
        assert!(matches!(theta_char(T00, C64::new(0.1, 0.0), &p), Err(ThetaError::NotConverged(_))));
    }

    #[test]
    fn sln_theta_zero_at_origin() {
        let v = theta_sln(0, C64::new(0.0, 0.0), 3, &p_i()).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn sln_theta_period_n_in_j() {
        let p = p_i();
        let u = C64::new(0.17, 0.0);
        for j in 0..3 {
            let a = theta_sln(j, u, 3, &p).unwrap();
            let b = theta_sln(j + 3, u, 3, &p).unwrap();
            assert!((a - b).norm() < 1e-13 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn sln_theta_matches_plain_sum() {
        let p = p_i();
        let u = C64::new(0.2, 0.0);
        let v = theta_sln(1, u, 2, &p).unwrap();
        // Independent order: descending m over a fixed window.
        let mut oracle = C64::new(0.0, 0.0);
        for m in (-30i64..=30).rev() {
            let a = m as f64 + 0.5 - 0.5;
            oracle += (C64::i() * PI * 2.0 * C64::i() * a * a + C64::i() * 2.0 * PI * a * (u + 0.5)).exp();
        }
        assert!(v.norm() > 1e-3);
        assert!((v - oracle).norm() < 1e-14 * oracle.norm().max(1.0));
    }

    #[test]
    fn weights_equal_one_at_eta() {
        let p = ThetaParams::new(C64::new(0.1, 1.2)).unwrap();
        let eta = C64::new(0.23, 0.02);
        for w in ell_weights(eta, eta, &p).unwrap() {
            assert!((w - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn weights_reject_lattice_eta() {
        assert!(matches!(
            ell_weights(C64::new(0.3, 0.0), C64::new(0.0, 0.0), &p_i()),
            Err(ThetaError::VanishingDenominator(..))
        ));
    }

    #[test]
    fn qpow_follows_tau() {
        let p = p_i();
        assert!((p.qpow(0.125) - C64::new((-PI / 4.0).exp(), 0.0)).norm() < 1e-15);
        let pq = ThetaParams::from_nome(1e-6).unwrap();
        assert!((pq.q() - 1e-6).norm() < 1e-18);
    }
}
