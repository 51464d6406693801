//! Topology optimization as a bi-level knapsack problem.
//!
//! The lower level is a linear-elastic finite-element solve; the upper level
//! is a 0-1 knapsack over element densities, solved analytically through its
//! canonical dual. SIMP and BESO are included as reference methods.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cubic;
pub mod knapsack;
pub mod linalg;
pub mod fem;
pub mod problems;
pub mod driver;
pub mod baselines;
pub mod analytic;
pub mod io;

pub use knapsack::{BinaryDensity, DualPoint, KnapsackError, KnapsackInstance};
