//! Sklyanin algebras realised by two-term difference operators, in the
//! elliptic, trigonometric and rational families.
//!
//! Operator identities are checked pointwise: both sides are applied to the
//! test functions `1`, `u`, `exp(0.3u)` at pole-guarded sample points.

mod basis;
mod casimir;
mod constants;
mod diffop;
mod generators;
mod relations;

use num_complex::Complex64 as C64;
use thiserror::Error;
use yb_theta::ThetaError;

pub use basis::{basis_change_check, basis_change_residual, trig_to_elliptic, BasisChange};
pub use casimir::{
    casimir_check, casimir_closed_form, casimirs, eigenvalue_estimate, ClosedForm, EigenEstimate,
};
pub use constants::{elliptic_j, j_ij, structure_constants, trig_limit_estimates, JLabeling, StructureConstants};
pub use diffop::{coeff, op_residual, standard_test_fns, Coeff, DiffOp, TestFn};
pub use generators::{build_generators, build_generators_with, point_guard_ok, Family, GenVariant, GeneratorSet};
pub use relations::{
    algebra_check, default_points, elliptic_relations, guarded_points, relation_residuals, relations, Relation,
    RelationForm,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SklyaninError {
    #[error("difference operators with different steps {0} and {1}")]
    StepMismatch(C64, C64),
    #[error("pole guard: {0}")]
    PoleGuard(String),
    #[error("the elliptic family needs tau")]
    MissingTau,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

pub type Result<T> = std::result::Result<T, SklyaninError>;
