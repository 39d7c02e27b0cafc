//! Dense complex matrices and the residual plumbing shared by every checker.
//!
//! Matrices are small (at most a few thousand rows), row-major and owned.
//! Operations that can fail on shape return [`LinalgError`]; the arithmetic
//! operators panic on shape mismatch, which is always a programming error.

mod matrix;
mod report;
mod residual;

pub use matrix::{embed_factor, kron, permutation_op, Matrix, MAX_DIM};
pub use report::{c64_json, CheckReport, VariantChoice};
pub use residual::{max_rel_residual, qybe_residual, rel_diff, NormKind, Residual};

pub use num_complex::Complex64 as C64;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dimension {0} exceeds the configured maximum {MAX_DIM}")]
    TooLarge(usize),
    #[error("matrix is singular to tolerance (pivot {pivot:e} against scale {scale:e})")]
    Singular { pivot: f64, scale: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Shorthand for a complex literal.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real number as a complex scalar.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}
