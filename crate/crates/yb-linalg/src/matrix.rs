use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::{LinalgError, Result};

/// Largest side length any constructor will accept. sl(15) triple products
/// are 3375 on a side.
pub const MAX_DIM: usize = 4096;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Invalid("empty matrix".into()));
        }
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(LinalgError::TooLarge(rows.max(cols)));
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let v: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * k).collect() }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![C64::new(0.0, 0.0); n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * p..(k + 1) * p];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { rows: n, cols: p, data: out })
    }

    /// LU factorisation with partial pivoting. Returns the packed factors,
    /// the row permutation and its sign.
    fn lu(&self) -> Result<(Vec<C64>, Vec<usize>, f64)> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("LU of a non-square matrix".into()));
        }
        let n = self.rows;
        let scale = self.max_abs();
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmag >= 1e-12 * scale) || scale == 0.0 {
                return Err(LinalgError::Singular { pivot: pmag, scale });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                a[i * n + k] = f;
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
        Ok((a, perm, sign))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        let (lu, perm, _) = self.lu()?;
        let mut inv = Self::zeros(n, n);
        for col in 0..n {
            // Solve L U x = P e_col.
            let mut x: Vec<C64> = (0..n)
                .map(|i| if perm[i] == col { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    let t = x[k];
                    x[i] -= lu[i * n + k] * t;
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let t = x[k];
                    x[i] -= lu[i * n + k] * t;
                }
                x[i] /= lu[i * n + i];
            }
            for i in 0..n {
                inv[(i, col)] = x[i];
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<C64> {
        match self.lu() {
            Ok((lu, _, sign)) => {
                let n = self.rows;
                Ok((0..n).map(|i| lu[i * n + i]).product::<C64>() * sign)
            }
            Err(LinalgError::Singular { .. }) => Ok(C64::new(0.0, 0.0)),
            Err(e) => Err(e),
        }
    }

    /// `a * self * a^{-1}`.
    pub fn conjugate_by(&self, a: &Self) -> Result<Self> {
        a.matmul(self)?.matmul(&a.inverse()?)
    }

    /// Apply the index relabelling `r -> p[r]` to rows and columns at once,
    /// i.e. conjugation by the permutation matrix of `p`.
    pub fn permute_symmetric(&self, p: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(p[r], p[c])] = self[(r, c)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix product shape")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum shape")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference shape")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6e}{:+.6e}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let rows = a.rows.checked_mul(b.rows).ok_or(LinalgError::TooLarge(usize::MAX))?;
    let cols = a.cols.checked_mul(b.cols).ok_or(LinalgError::TooLarge(usize::MAX))?;
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(LinalgError::TooLarge(rows.max(cols)));
    }
    Ok(Matrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    }))
}

/// The swap operator on `C^d ⊗ C^d`.
pub fn permutation_op(d: usize) -> Result<Matrix> {
    if d < 2 {
        return Err(LinalgError::Invalid(format!("permutation operator needs d >= 2, got {d}")));
    }
    let mut p = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            p[(i * d + j, j * d + i)] = C64::new(1.0, 0.0);
        }
    }
    Ok(p)
}

/// Embed a two-factor operator `m` into factors `(i, j)` (1-based, `i < j`)
/// of an `n`-fold tensor product of `C^d`.
///
/// The operator is first placed on the adjacent pair `(i, i+1)`; when `j` is
/// further out, factors `i+1` and `j` are exchanged by a permutation
/// conjugation, carried out as an index relabelling.
pub fn embed_factor(m: &Matrix, i: usize, j: usize, n: usize, d: usize) -> Result<Matrix> {
    if m.rows != d * d || m.cols != d * d {
        return Err(LinalgError::DimensionMismatch(format!(
            "operator is {}x{}, expected {}x{}",
            m.rows,
            m.cols,
            d * d,
            d * d
        )));
    }
    if !(1 <= i && i < j && j <= n) {
        return Err(LinalgError::Invalid(format!("bad factor pair ({i},{j}) of {n}")));
    }
    let total = d.checked_pow(n as u32).ok_or(LinalgError::TooLarge(usize::MAX))?;
    if total > MAX_DIM {
        return Err(LinalgError::TooLarge(total));
    }
    let left = Matrix::identity(d.pow((i - 1) as u32));
    let right = Matrix::identity(d.pow((n - i - 1) as u32));
    let adjacent = kron(&kron(&left, m)?, &right)?;
    if j == i + 1 {
        return Ok(adjacent);
    }
    // Digit positions are 0-based from the most significant factor.
    let (a, b) = (i, j - 1);
    let perm: Vec<usize> = (0..total)
        .map(|idx| {
            let mut digits = to_digits(idx, d, n);
            digits.swap(a, b);
            from_digits(&digits, d)
        })
        .collect();
    Ok(adjacent.permute_symmetric(&perm))
}

fn to_digits(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = idx % d;
        idx /= d;
    }
    out
}

fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c, max_rel_residual, re};

    fn pauli1() -> Matrix {
        Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    #[test]
    fn kron_identity() {
        let i2 = Matrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn kron_pauli_is_antidiagonal() {
        let k = kron(&pauli1(), &pauli1()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(k[(i, j)], re(want));
            }
        }
    }

    #[test]
    fn kron_block_expansion() {
        let a = Matrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let want = Matrix::from_real_rows(&[
            &[0.0, 1.0, 0.0, 2.0],
            &[1.0, 0.0, 2.0, 0.0],
            &[0.0, 3.0, 0.0, 4.0],
            &[3.0, 0.0, 4.0, 0.0],
        ])
        .unwrap();
        assert_eq!(kron(&a, &pauli1()).unwrap(), want);
    }

    #[test]
    fn kron_rejects_oversize() {
        let big = Matrix::identity(100);
        assert!(matches!(kron(&big, &big), Err(LinalgError::TooLarge(_))));
    }

    #[test]
    fn permutation_d2() {
        let want = Matrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(permutation_op(2).unwrap(), want);
        assert!(permutation_op(1).is_err());
    }

    #[test]
    fn permutation_is_involution() {
        for d in [2, 3] {
            let p = permutation_op(d).unwrap();
            assert_eq!(&p * &p, Matrix::identity(d * d));
        }
    }

    #[test]
    fn embed_adjacent_and_identity() {
        let p = permutation_op(2).unwrap();
        assert_eq!(embed_factor(&p, 1, 2, 3, 2).unwrap(), kron(&p, &Matrix::identity(2)).unwrap());
        assert_eq!(embed_factor(&Matrix::identity(4), 1, 3, 3, 2).unwrap(), Matrix::identity(8));
    }

    #[test]
    fn embed_13_matches_conjugation() {
        let m = Matrix::from_fn(4, 4, |i, j| c(i as f64 + 0.3 * j as f64, (i * j) as f64 - 1.0));
        let i2 = Matrix::identity(2);
        let ip = kron(&i2, &permutation_op(2).unwrap()).unwrap();
        let want = &(&ip * &kron(&m, &i2).unwrap()) * &ip;
        assert_eq!(embed_factor(&m, 1, 3, 3, 2).unwrap(), want);
    }

    #[test]
    fn embed_rejects_bad_shapes() {
        assert!(embed_factor(&Matrix::identity(3), 1, 2, 3, 2).is_err());
        assert!(embed_factor(&Matrix::identity(4), 2, 2, 3, 2).is_err());
        assert!(embed_factor(&Matrix::identity(4), 1, 4, 3, 2).is_err());
    }

    #[test]
    fn inverse_and_det() {
        let a = Matrix::from_rows(&[vec![c(2.0, 1.0), c(0.5, 0.0)], vec![c(0.0, -1.0), c(3.0, 0.0)]])
            .unwrap();
        let inv = a.inverse().unwrap();
        assert!(max_rel_residual(&(&a * &inv), &Matrix::identity(2)).unwrap().value < 1e-15);
        let d = a.det().unwrap();
        assert!((d - (c(2.0, 1.0) * 3.0 - c(0.5, 0.0) * c(0.0, -1.0))).norm() < 1e-15);
    }

    #[test]
    fn singular_inverse_is_an_error() {
        let a = Matrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(a.inverse(), Err(LinalgError::Singular { .. })));
        assert_eq!(a.det().unwrap(), re(0.0));
    }

    #[test]
    fn new_validates_length() {
        assert!(Matrix::new(2, 2, vec![re(1.0); 3]).is_err());
    }
}
