//! Reference methods: SIMP with optimality-criteria updates, and BESO read
//! as a greedy knapsack selection under the same volume schedule as CDT.

mod beso;
mod probe;
mod simp;

pub use beso::{greedy_select, run_beso, run_beso_traced, BesoConfig, BesoStep};
pub use probe::{per_iteration_cost_probe, CostRow, ProbeConfig};
pub use simp::{gray_count, run_simp, SensitivityFilter, SimpConfig, SimpRun, DENSITY_FLOOR};
