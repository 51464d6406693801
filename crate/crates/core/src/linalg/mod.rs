//! Sparse symmetric storage and the solvers used for the equilibrium system.

mod cg;
mod csr;
mod ordering;
mod skyline;

pub use cg::{conjugate_gradient, CgOutcome};
pub use csr::{CsrMatrix, CsrPattern};
pub use ordering::reverse_cuthill_mckee;
pub use skyline::{SkylineCholesky, SkylineLayout};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("conjugate gradient stopped after {iterations} iterations at relative residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
