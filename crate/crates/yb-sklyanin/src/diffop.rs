use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::{Result, SklyaninError};

/// A closed-form coefficient `u ↦ c(u)`.
pub type Coeff = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// `Σ_k c_k(u) T^k` where `(T^k f)(u) = f(u + kη)`.
#[derive(Clone)]
pub struct DiffOp {
    eta: C64,
    terms: BTreeMap<i32, Coeff>,
}

pub fn coeff(f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Coeff {
    Arc::new(f)
}

impl DiffOp {
    pub fn zero(eta: C64) -> Self {
        Self { eta, terms: BTreeMap::new() }
    }

    pub fn scalar(eta: C64, c: C64) -> Self {
        Self::term(eta, 0, coeff(move |_| c))
    }

    pub fn identity(eta: C64) -> Self {
        Self::scalar(eta, C64::new(1.0, 0.0))
    }

    /// Pure shift `T^k`.
    pub fn shift(eta: C64, k: i32) -> Self {
        Self::term(eta, k, coeff(|_| C64::new(1.0, 0.0)))
    }

    pub fn term(eta: C64, k: i32, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, c);
        Self { eta, terms }
    }

    pub fn from_terms(eta: C64, terms: impl IntoIterator<Item = (i32, Coeff)>) -> Self {
        let mut op = Self::zero(eta);
        for (k, c) in terms {
            op.add_term(k, c);
        }
        op
    }

    fn add_term(&mut self, k: i32, c: Coeff) {
        let merged = match self.terms.remove(&k) {
            Some(old) => coeff(move |u| old(u) + c(u)),
            None => c,
        };
        self.terms.insert(k, merged);
    }

    pub fn eta(&self) -> C64 {
        self.eta
    }

    pub fn shifts(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    pub fn coefficient(&self, k: i32, u: C64) -> C64 {
        self.terms.get(&k).map_or(C64::new(0.0, 0.0), |c| c(u))
    }

    /// `Σ_k c_k(u) f(u + kη)`.
    pub fn apply(&self, f: &dyn Fn(C64) -> C64, u: C64) -> C64 {
        self.terms.iter().map(|(&k, c)| c(u) * f(u + self.eta * k as f64)).sum()
    }

    fn check_step(&self, other: &Self) -> Result<()> {
        if self.eta != other.eta {
            return Err(SklyaninError::StepMismatch(self.eta, other.eta));
        }
        Ok(())
    }

    /// `(a∘b)`: shifts add, coefficient `c^a_k(u) c^b_l(u + kη)`.
    pub fn try_compose(&self, other: &Self) -> Result<Self> {
        self.check_step(other)?;
        let eta = self.eta;
        let mut out = Self::zero(eta);
        for (&k, a) in &self.terms {
            for (&l, b) in &other.terms {
                let (a, b) = (a.clone(), b.clone());
                let dk = eta * k as f64;
                out.add_term(k + l, coeff(move |u| a(u) * b(u + dk)));
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_step(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&k, c)| {
                let c = c.clone();
                (k, coeff(move |u| s * c(u)))
            })
            .collect();
        Self { eta: self.eta, terms }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.try_compose(other)? - &other.try_compose(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.try_compose(other)? + &other.try_compose(self)?)
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffOp").field("eta", &self.eta).field("shifts", &self.shifts()).finish()
    }
}

// The operators panic on a step mismatch; use the `try_` methods when the
// steps are not known to agree.

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.try_compose(rhs).expect("difference operators with different steps")
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        self.try_add(rhs).expect("difference operators with different steps")
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self.try_add(&rhs.scale(C64::new(-1.0, 0.0))).expect("difference operators with different steps")
    }
}

impl Mul<C64> for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: C64) -> DiffOp {
        self.scale(rhs)
    }
}

impl Mul<f64> for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: f64) -> DiffOp {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// A test function for operator identities.
pub type TestFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// The fixed suite `1`, `u`, `exp(0.3u)`.
pub fn standard_test_fns() -> Vec<TestFn> {
    vec![
        Arc::new(|_| C64::new(1.0, 0.0)),
        Arc::new(|u| u),
        Arc::new(|u: C64| (u * 0.3).exp()),
    ]
}

/// `max |a f(u) - b f(u)| / (1 + |b f(u)|)` over test functions and points.
pub fn op_residual(a: &DiffOp, b: &DiffOp, fns: &[TestFn], points: &[C64]) -> f64 {
    let mut worst = 0.0f64;
    for f in fns {
        for &u in points {
            let x = a.apply(f.as_ref(), u);
            let y = b.apply(f.as_ref(), u);
            let r = (x - y).norm() / (1.0 + y.norm());
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_composes_to_identity() {
        let e = c(0.3, 0.0);
        let id = DiffOp::identity(e);
        let p = &id * &id;
        assert_eq!(p.shifts(), vec![0]);
        assert_eq!(p.coefficient(0, c(1.7, 0.2)), c(1.0, 0.0));
    }

    #[test]
    fn shifted_coefficient_rule() {
        let e = c(0.25, 0.0);
        let a = DiffOp::term(e, 1, coeff(|u| u * u));
        let b = DiffOp::term(e, 1, coeff(|u| u + 3.0));
        let p = &a * &b;
        assert_eq!(p.shifts(), vec![2]);
        let u = c(0.4, 0.1);
        assert!((p.coefficient(2, u) - u * u * (u + e + 3.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_examples() {
        let sq = |u: C64| u * u;
        assert_eq!(DiffOp::identity(c(0.5, 0.0)).apply(&sq, c(3.0, 0.0)), c(9.0, 0.0));
        assert_eq!(DiffOp::shift(c(0.5, 0.0), 1).apply(&|u| u, c(1.0, 0.0)), c(1.5, 0.0));
        assert_eq!(DiffOp::zero(c(0.5, 0.0)).apply(&sq, c(2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn zero_function_maps_to_zero() {
        let e = c(0.2, 0.0);
        let op = DiffOp::from_terms(e, [(1, coeff(|u| u)), (-1, coeff(|u| u.exp()))]);
        assert_eq!(op.apply(&|_| c(0.0, 0.0), c(0.7, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn step_mismatch_is_an_error() {
        let a = DiffOp::shift(c(0.2, 0.0), 1);
        let b = DiffOp::shift(c(0.3, 0.0), 1);
        assert!(matches!(a.try_compose(&b), Err(SklyaninError::StepMismatch(..))));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn shift_commutes_with_constant_only() {
        let e = c(0.2, 0.0);
        let t = DiffOp::shift(e, 1);
        let k = DiffOp::scalar(e, c(2.0, 1.0));
        let fns = standard_test_fns();
        let pts = [c(0.3, 0.0), c(0.9, 0.1)];
        assert_eq!(op_residual(&t.commutator(&k).unwrap(), &DiffOp::zero(e), &fns, &pts), 0.0);
        let m = DiffOp::term(e, 0, coeff(|u| u));
        assert!(op_residual(&t.commutator(&m).unwrap(), &DiffOp::zero(e), &fns, &pts) > 0.1);
    }
}
