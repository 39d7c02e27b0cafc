use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::{embed_factor, LinalgError, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    MaxAbsRelative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub norm_kind: NormKind,
}

impl Residual {
    pub fn new(value: f64) -> Self {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        Self { value, norm_kind: NormKind::MaxAbsRelative }
    }
}

/// `|a - b| / (1 + max(|a|, |b|))`. Non-finite input yields infinity.
pub fn rel_diff(a: C64, b: C64) -> f64 {
    let d = (a - b).norm() / (1.0 + a.norm().max(b.norm()));
    if d.is_finite() {
        d
    } else if a == b {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Entrywise maximum of [`rel_diff`].
pub fn max_rel_residual(a: &Matrix, b: &Matrix) -> Result<Residual> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "residual of {}x{} against {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let v = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(&x, &y)| rel_diff(x, y))
        .fold(0.0, f64::max);
    Ok(Residual::new(v))
}

/// Residual of `R12(u-v) R13(u) R23(v) = R23(v) R13(u) R12(u-v)`.
///
/// Pass the same matrix three times to test the constant equation.
pub fn qybe_residual(r_uv: &Matrix, r_u: &Matrix, r_v: &Matrix) -> Result<Residual> {
    let n = r_uv.rows();
    let d = (1..=64).find(|d| d * d == n).ok_or_else(|| {
        LinalgError::DimensionMismatch(format!("{n} is not the square of a local dimension"))
    })?;
    for m in [r_u, r_v] {
        if m.rows() != n || m.cols() != n {
            return Err(LinalgError::DimensionMismatch("R-matrices of different sizes".into()));
        }
    }
    let r12 = embed_factor(r_uv, 1, 2, 3, d)?;
    let r13 = embed_factor(r_u, 1, 3, 3, d)?;
    let r23 = embed_factor(r_v, 2, 3, 3, d)?;
    let lhs = r12.matmul(&r13)?.matmul(&r23)?;
    let rhs = r23.matmul(&r13)?.matmul(&r12)?;
    max_rel_residual(&lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{permutation_op, re};

    #[test]
    fn identical_is_zero() {
        let m = Matrix::from_fn(3, 3, |i, j| C64::new(i as f64, j as f64));
        assert_eq!(max_rel_residual(&m, &m).unwrap().value, 0.0);
    }

    #[test]
    fn identity_against_zero() {
        let r = max_rel_residual(&Matrix::identity(2), &Matrix::zeros(2, 2)).unwrap();
        assert_eq!(r.value, 0.5);
    }

    #[test]
    fn small_perturbation() {
        let mut m = Matrix::identity(2);
        m[(0, 0)] += re(1e-9);
        let r = max_rel_residual(&Matrix::identity(2), &m).unwrap().value;
        assert!((r - 5e-10).abs() < 1e-15, "{r}");
    }

    #[test]
    fn shape_mismatch() {
        assert!(max_rel_residual(&Matrix::identity(2), &Matrix::identity(3)).is_err());
    }

    #[test]
    fn nan_is_infinite() {
        let mut m = Matrix::identity(2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert_eq!(max_rel_residual(&m, &Matrix::identity(2)).unwrap().value, f64::INFINITY);
    }

    #[test]
    fn permutation_solves_constant_ybe() {
        for d in [2, 3] {
            let p = permutation_op(d).unwrap();
            assert_eq!(qybe_residual(&p, &p, &p).unwrap().value, 0.0);
        }
    }
}
