//! Closed-form trigonometric and rational sl(3) R-matrices, written as 3×3
//! blocks `R_ab`, with block `(a, b)` entry `(r, c)` at `(3(a−1)+r, 3(b−1)+c)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use yb_linalg::Matrix;

use crate::{Result, SlnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefKind {
    Trig,
    Rat,
}

type Block = [[C64; 3]; 3];

fn assemble(blocks: &[[Block; 3]; 3]) -> Matrix {
    Matrix::from_fn(9, 9, |row, col| blocks[row / 3][col / 3][row % 3][col % 3])
}

pub fn reference_n3(kind: RefKind, u: C64, eta: C64) -> Result<Matrix> {
    match kind {
        RefKind::Trig => Ok(trig(u, eta)),
        RefKind::Rat => {
            if eta.norm() < 1e-13 {
                return Err(SlnError::PoleGuard("eta = 0".into()));
            }
            Ok(rat(u, eta))
        }
    }
}

fn trig(u: C64, eta: C64) -> Matrix {
    let s = |z: C64| (z * PI).sin();
    let e = |z: C64| (C64::i() * PI * z).exp();
    let z = C64::new(0.0, 0.0);
    let i2 = C64::new(0.0, 2.0);
    let (s2, su, sp) = (s(eta * 2.0), s(u), s(u + eta * 2.0));
    let ep = e(eta * 2.0 / 3.0);
    let em = e(-eta * 2.0 / 3.0);
    let up = e(u / 3.0);
    let um = e(-u / 3.0);
    let w = u + eta * 2.0;
    let b11 = [[sp, z, z], [z, su * ep, z], [z, z, su * em]];
    let b12 = [[z, z, z], [s2 * up, z, z], [z, i2 * s2 * su * e(-w * 2.0 / 3.0), z]];
    let b13 = [[z, z, z], [z, z, z], [s2 * um, z, z]];
    let b21 = [[z, s2 * um, z], [z, z, z], [-i2 * s2 * su * e(w * 2.0 / 3.0), z, z]];
    let b22 = [[su * em, z, z], [z, sp, z], [z, z, su * ep]];
    let b23 = [[z, z, z], [z, z, z], [z, s2 * up, z]];
    let v = (u - eta * 2.0) / 3.0;
    let b31 = [
        [z, z, s2 * up],
        [i2 * s2 * su * e(-w * 2.0 / 3.0), z, z],
        [z, s2 * su * sp * e(v) * 4.0, z],
    ];
    let b32 = [
        [z, -i2 * s2 * su * e(w * 2.0 / 3.0), z],
        [z, z, s2 * um],
        [s2 * su * sp * e(-v) * 4.0, z, z],
    ];
    let b33 = [[su * ep, z, z], [z, su * em, z], [z, z, sp]];
    assemble(&[[b11, b12, b13], [b21, b22, b23], [b31, b32, b33]])
}

fn rat(u: C64, e: C64) -> Matrix {
    let i = C64::i();
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let d = u / (e * 2.0);
    let (u2, u3, u4, u5, u6) = (u.powi(2), u.powi(3), u.powi(4), u.powi(5), u.powi(6));
    let (e2, e3, e4, e5) = (e.powi(2), e.powi(3), e.powi(4), e.powi(5));
    let q = u2 * (4.0 / 3.0) + u * e * (8.0 / 3.0);
    let p4 = -u4 * (32.0 / 81.0) - u3 * e * (32.0 / 27.0) - u2 * e2 * (64.0 / 27.0) - u * e3 * (256.0 / 81.0);

    let b11 = [
        [d + 1.0, z, z],
        [-i * u * (2.0 / 3.0), d, z],
        [-i * (u3 * (16.0 / 27.0) + e2 * u * (64.0 / 27.0) + u2 * e * (16.0 / 9.0)), -q, d],
    ];
    let b12 = [[z, z, z], [one, z, z], [-q, i * u * 2.0, z]];
    let b13 = [[z, z, z], [z, z, z], [one, z, z]];
    let b21 = [
        [i * u * (2.0 / 3.0), one, z],
        [-u2 * (8.0 / 9.0) - u * e * (16.0 / 9.0), z, z],
        [p4, i * (u3 * (8.0 / 27.0) + u * e2 * (32.0 / 9.0) + u2 * e * (16.0 / 9.0)), -i * u * (2.0 / 3.0)],
    ];
    let b22 = [
        [d, z, z],
        [z, d + 1.0, z],
        [i * (u3 * (8.0 / 9.0) + e2 * u * (32.0 / 27.0) + u2 * e * (16.0 / 9.0)), z, d],
    ];
    let b23 = [[z, z, z], [z, z, z], [-i * u * (2.0 / 3.0), one, z]];
    let b31 = [
        [i * (u3 * (16.0 / 27.0) + e2 * u * (64.0 / 27.0) + u2 * e * (16.0 / 9.0)), -q, one],
        [p4, -i * (u3 * (8.0 / 9.0) + u2 * e * (16.0 / 9.0) + e2 * u * (32.0 / 27.0)), i * u * (2.0 / 3.0)],
        [
            -(u2 * e4 * (1024.0 / 243.0)
                + u3 * e3 * (512.0 / 243.0)
                + u5 * e * (128.0 / 243.0)
                + u6 * (128.0 / 729.0)
                + u4 * e2 * (256.0 / 243.0)
                + u * e5 * (4096.0 / 729.0)),
            i * (-u5 * (32.0 / 81.0) + e4 * u * (512.0 / 81.0) - u4 * e * (64.0 / 81.0) + u2 * e3 * (256.0 / 81.0)),
            i * (u3 * (8.0 / 27.0) - e2 * u * (32.0 / 27.0)),
        ],
    ];
    let b32 = [
        [-q, -i * u * 2.0, z],
        [-i * (u3 * (8.0 / 27.0) + u * e2 * (32.0 / 9.0) + u2 * e * (16.0 / 9.0)), z, one],
        [
            i * (-e4 * u * (512.0 / 81.0) - u2 * e3 * (256.0 / 81.0) + u4 * e * (64.0 / 81.0) + u5 * (32.0 / 81.0)),
            -u4 * (32.0 / 27.0) - u3 * e * (32.0 / 9.0) - u2 * e2 * (64.0 / 9.0) - u * e3 * (256.0 / 27.0),
            q,
        ],
    ];
    let b33 = [
        [d, z, z],
        [i * u * (2.0 / 3.0), d, z],
        [i * (-u3 * (8.0 / 27.0) + e2 * u * (32.0 / 27.0)), q, d + 1.0],
    ];
    assemble(&[[b11, b12, b13], [b21, b22, b23], [b31, b32, b33]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use yb_linalg::qybe_residual;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rat_unit_block_entry() {
        let r = reference_n3(RefKind::Rat, c(1.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((r[(0, 0)] - 2.0).norm() < 1e-15);
    }

    #[test]
    fn references_satisfy_qybe() {
        let (u, v, eta) = (c(0.4, 0.0), c(-0.13, 0.1), c(0.15, 0.0));
        for kind in [RefKind::Trig, RefKind::Rat] {
            let r = |w| reference_n3(kind, w, eta).unwrap();
            let res = qybe_residual(&r(u - v), &r(u), &r(v)).unwrap().value;
            assert!(res < 1e-12, "{kind:?}: {res}");
        }
    }

    #[test]
    fn rat_pole_guard() {
        assert!(reference_n3(RefKind::Rat, c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }
}
