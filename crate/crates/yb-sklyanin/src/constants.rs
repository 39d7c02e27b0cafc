use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use yb_theta::{theta_char, Characteristic, ThetaParams};

use crate::generators::Family;
use crate::{Result, SklyaninError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StructureConstants {
    /// `J1, J2, J3`.
    Elliptic { j: [C64; 3] },
    /// `C1, C2, C3` and the Casimir constants `L1, L3`.
    Trig { c: [C64; 3], l1: C64, l3: C64 },
    /// The rational relations carry their constants inline.
    Rat,
}

impl StructureConstants {
    pub fn family(&self) -> Family {
        match self {
            Self::Elliptic { .. } => Family::Elliptic,
            Self::Trig { .. } => Family::Trig,
            Self::Rat => Family::Rat,
        }
    }
}

/// `J_a = θ_a(2η)θ_a(0)/θ_a(η)²` for `a = 01, 00, 10`.
pub fn elliptic_j(eta: C64, p: &ThetaParams) -> Result<[C64; 3]> {
    use Characteristic::*;
    let mut out = [C64::new(0.0, 0.0); 3];
    for (slot, ch) in out.iter_mut().zip([T01, T00, T10]) {
        let den = theta_char(ch, eta, p)?;
        if den.norm() < 1e-13 {
            return Err(SklyaninError::PoleGuard(format!("{}(eta) = 0", ch.label())));
        }
        *slot = theta_char(ch, eta * 2.0, p)? * theta_char(ch, C64::new(0.0, 0.0), p)? / (den * den);
    }
    Ok(out)
}

/// `J_ij = (J_j − J_i)/J_k` with `{i, j, k} = {1, 2, 3}`, indices 1-based.
pub fn j_ij(j: &[C64; 3], i: usize, jj: usize) -> C64 {
    assert!(i != jj && (1..=3).contains(&i) && (1..=3).contains(&jj), "indices must be distinct in 1..=3");
    let k = 6 - i - jj;
    (j[jj - 1] - j[i - 1]) / j[k - 1]
}

pub fn structure_constants(family: Family, eta: C64, theta: Option<&ThetaParams>) -> Result<StructureConstants> {
    match family {
        Family::Elliptic => {
            let p = theta.ok_or(SklyaninError::MissingTau)?;
            let j = elliptic_j(eta, p)?;
            if j.iter().any(|z| z.norm() < 1e-14) {
                return Err(SklyaninError::PoleGuard("vanishing J".into()));
            }
            Ok(StructureConstants::Elliptic { j })
        }
        Family::Trig => {
            let c = (eta * PI).cos();
            if c.norm() < 1e-12 {
                return Err(SklyaninError::PoleGuard("cos(pi eta) = 0".into()));
            }
            let s = (eta * PI).sin();
            let (c2, s2) = (c * c, s * s);
            let cos2 = (eta * 2.0 * PI).cos();
            let c1v = -s2 * 2.0 / c2;
            let c2v = -s2 * cos2 * 16.0 / c2;
            let c3v = (eta * 2.0 * PI).sin().powi(2) * 4.0;
            let l1 = cos2 / c2;
            let l3 = c2 * 48.0 - 16.0 - c2 * c2 * 32.0;
            Ok(StructureConstants::Trig { c: [c1v, c2v, c3v], l1, l3 })
        }
        Family::Rat => Ok(StructureConstants::Rat),
    }
}

/// Which elliptic labels feed the trigonometric limits.
///
/// `Printed` uses `J1, J2, J3` directly and expands in `q`. `Swapped`
/// exchanges `J1 ↔ J3` and expands `C2`, `C3` in `q^{1/2}`; only the second
/// converges to the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JLabeling {
    Printed,
    Swapped,
}

impl JLabeling {
    pub fn name(self) -> &'static str {
        match self {
            Self::Printed => "printed",
            Self::Swapped => "swapped_sqrt_q",
        }
    }
}

/// Estimates of `C1, C2, C3` from the elliptic `J_ij` at nome `q`.
pub fn trig_limit_estimates(eta: C64, q: f64, labeling: JLabeling) -> Result<[C64; 3]> {
    let p = ThetaParams::from_nome(q)?;
    let mut j = elliptic_j(eta, &p)?;
    let scale = match labeling {
        JLabeling::Printed => (1.0, q),
        JLabeling::Swapped => {
            j.swap(0, 2);
            (q.sqrt(), q.sqrt())
        }
    };
    let (j12, j23, j31) = (j_ij(&j, 1, 2), j_ij(&j, 2, 3), j_ij(&j, 3, 1));
    Ok([j31 - j12, (j12 + j31) / scale.0, j23 / scale.1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn trig(eta: f64) -> ([C64; 3], C64, C64) {
        match structure_constants(Family::Trig, c(eta, 0.0), None).unwrap() {
            StructureConstants::Trig { c, l1, l3 } => (c, l1, l3),
            _ => unreachable!(),
        }
    }

    #[test]
    fn c3_at_quarter() {
        assert!((trig(0.25).0[2] - 4.0).norm() < 1e-12);
    }

    #[test]
    fn small_eta_constants_vanish() {
        let (cs, _, _) = trig(1e-3);
        assert!(cs[0].norm() < 2e-5);
        assert!(cs[1].norm() < 2e-4);
        assert!((cs[2].norm() / 1e-6 - 16.0 * PI * PI).abs() < 1e-2);
    }

    #[test]
    fn l_constants_closed_form() {
        let (_, l1, l3) = trig(0.2);
        let cp = (0.2 * PI).cos();
        assert!((l1.re - (0.4 * PI).cos() / (cp * cp)).abs() < 1e-12);
        assert!((l3.re - (48.0 * cp * cp - 16.0 - 32.0 * cp.powi(4))).abs() < 1e-12);
    }

    #[test]
    fn trig_pole_guard() {
        assert!(matches!(structure_constants(Family::Trig, c(0.5, 0.0), None), Err(SklyaninError::PoleGuard(_))));
    }

    #[test]
    fn j_ij_antisymmetric() {
        let p = ThetaParams::new(c(0.0, 1.2)).unwrap();
        let j = elliptic_j(c(0.17, 0.0), &p).unwrap();
        for (a, b) in [(1, 2), (2, 3), (3, 1)] {
            assert_eq!(j_ij(&j, a, b), -j_ij(&j, b, a));
        }
    }

    #[test]
    fn swapped_limits_converge() {
        let eta = c(0.21, 0.0);
        let (cs, _, _) = trig(0.21);
        let est = trig_limit_estimates(eta, 1e-8, JLabeling::Swapped).unwrap();
        assert!((est[0] - cs[0]).norm() < 1e-6);
        assert!((est[1] - cs[1]).norm() < 1e-6);
        assert!((est[2] - cs[2]).norm() < 1e-6);
        let printed = trig_limit_estimates(eta, 1e-8, JLabeling::Printed).unwrap();
        assert!((printed[0] - cs[0]).norm() > 0.1);
    }
}
