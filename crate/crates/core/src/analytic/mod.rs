//! Small closed-form examples: Buridan's ass as a two-element knapsack, the
//! two-group symmetric truss, the two-variable SIMP compliance surface, and
//! the double-well triality demo.

mod buridan;
mod counterexample;
mod double_well;
mod truss;

pub use buridan::{buridan, BuridanResult};
pub use counterexample::{simp_counterexample, CounterexampleResult, SimpSurface, BOUNDARY_STEP};
pub use double_well::{double_well_triality, CriticalKind, CriticalPoint, DoubleWellSpec, TrialityReport};
pub use truss::{symmetric_truss, TrussResult, TrussSpec};
