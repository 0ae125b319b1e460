//! Solver for the equal width wave equation Uₜ + U·Uₓ − μ·Uₓₓₜ = 0 on a
//! uniform mesh, using cubic Hermite collocation in space (two Gauss-type
//! collocation points per element) and a Crank-Nicolson step with the
//! Rubin-Graves linearization of the U·Uₓ term, so each time level costs one
//! banded linear solve.
//!
//! The crate ships six benchmark problems (solitary waves, wave interactions,
//! a Maxwellian pulse, an undular bore, and a wave collision), diagnostics
//! (discrete error norms, the three conserved integrals and their drifts),
//! a von Neumann amplification scan, and a CLI that writes deterministic CSV.

// Parameter guards are written `!(x > 0.0)` so that NaN fails validation;
// the `x <= 0.0` form clippy prefers would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Stencil kernels index fixed-width arrays in lockstep ([f64; 4] shape rows
// against DOF windows); iterator chains would obscure the numbering.
#![allow(clippy::needless_range_loop)]

pub mod assembly;
pub mod banded;
pub mod basis;
pub mod config;
pub mod diagnostics;
pub mod mesh;
pub mod numfmt;
pub mod problems;
pub mod runner;
pub mod stability;
pub mod stepper;

pub use basis::{build_tables, collocation_roots, eval_local, BasisTables, LocalBasis, RootFamily};
pub use mesh::{build_mesh, global_dofs, CoeffVec, DirichletPair, Mesh};
pub use stepper::RunState;

/// Crate-wide error type. The CLI maps config errors to exit code 2 and
/// numerical failures to exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix: pivot {pivot:e} below threshold {threshold:e}")]
    Singular { pivot: f64, threshold: f64 },

    #[error("solution blew up at t={t}: max |coefficient| = {max_coeff:e}")]
    BlowUp { t: f64, max_coeff: f64 },

    #[error("amplification ratio singular at mode angle {phi}")]
    SingularMode { phi: f64 },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error("unknown problem {0:?}")]
    UnknownProblem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 0 success, 2 config error, 3 numerical/runtime failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::ConfigInvalid(_) | Error::UnknownProblem(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
