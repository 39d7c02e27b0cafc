//! Check suites, matrix emission and configuration behind the `ybcheck` binary.

pub mod config;
pub mod emit;
pub mod suites;

use thiserror::Error;

pub use config::{parse_complex, RunConfig, Sampler};
pub use emit::{build_matrix, parse_matrix, EmitFamily, EmitParams, Format, MatrixFile};
pub use suites::{run_suite, Suite};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config or input files: exit status 2.
    #[error("usage: {0}")]
    Usage(String),
    /// A library error such as a pole guard: exit status 1.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Numerical(_) => 1,
        }
    }
}
