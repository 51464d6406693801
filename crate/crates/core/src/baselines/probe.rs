use std::time::Instant;

use super::{run_beso, run_simp, BesoConfig, SimpConfig};
use crate::driver::{run_cdt, CdtConfig, DriverError, Method, RunRecord};
use crate::problems::{ProblemKind, ProblemSpec};

/// Settings shared by every run of a cost probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub problem: ProblemKind,
    pub volfrac: f64,
    pub mu: f64,
    pub omega2: f64,
    pub max_outer: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { problem: ProblemKind::Cantilever2d, volfrac: 0.5, mu: 0.975, omega2: 1e-2, max_outer: 2000 }
    }
}

/// Timing summary of one (method, mesh) run.
#[derive(Debug, Clone, PartialEq)]
pub struct CostRow {
    pub method: Method,
    pub dims: Vec<usize>,
    pub n_elements: usize,
    pub outer_iters: usize,
    pub inner_iters: usize,
    pub mean_select_ms: f64,
    pub mean_iter_ms: f64,
    pub total_ms: f64,
    pub converged: bool,
}

impl CostRow {
    fn from_record(dims: &[usize], n: usize, record: &RunRecord, total_ms: f64) -> Self {
        let k = record.len().max(1) as f64;
        Self {
            method: record.method,
            dims: dims.to_vec(),
            n_elements: n,
            outer_iters: record.len(),
            inner_iters: record.entries.iter().map(|e| e.inner_iters).sum(),
            mean_select_ms: record.entries.iter().map(|e| e.select_ms).sum::<f64>() / k,
            mean_iter_ms: record.entries.iter().map(|e| e.elapsed_ms).sum::<f64>() / k,
            total_ms,
            converged: record.converged,
        }
    }
}

/// Runs each method on each mesh and records per-iteration wall time.
/// A run that hits `max_outer` still yields a row, marked unconverged; any
/// other failure aborts the probe.
pub fn per_iteration_cost_probe(
    methods: &[Method],
    meshes: &[Vec<usize>],
    config: &ProbeConfig,
) -> Result<Vec<CostRow>, DriverError> {
    let mut rows = Vec::with_capacity(methods.len() * meshes.len());
    for dims in meshes {
        let model = ProblemSpec::new(config.problem, dims.clone())
            .build()
            .map_err(|source| DriverError::Fem { gamma: 0, source })?;
        let n = model.n_elements();
        for &method in methods {
            let start = Instant::now();
            let record = match method {
                Method::Cdt => {
                    let cfg = CdtConfig {
                        volfrac: config.volfrac,
                        mu: config.mu,
                        omega2: config.omega2,
                        max_outer: config.max_outer,
                        ..Default::default()
                    };
                    unconverged_ok(run_cdt(&model, &cfg).map(|r| r.record))?
                }
                Method::Beso => {
                    let cfg = BesoConfig {
                        volfrac: config.volfrac,
                        mu: config.mu,
                        omega2: config.omega2,
                        max_outer: config.max_outer,
                        ..Default::default()
                    };
                    unconverged_ok(run_beso(&model, &cfg).map(|r| r.record))?
                }
                Method::Simp => {
                    let cfg = SimpConfig { tol: config.omega2, max_iters: config.max_outer, ..Default::default() };
                    run_simp(&model, config.volfrac, &cfg)?.record
                }
            };
            let total_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(CostRow::from_record(dims, n, &record, total_ms));
        }
    }
    Ok(rows)
}

fn unconverged_ok(result: Result<RunRecord, DriverError>) -> Result<RunRecord, DriverError> {
    match result {
        Err(DriverError::MaxOuterExceeded { record, .. }) => Ok(*record),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_row_per_method_and_mesh() {
        let cfg = ProbeConfig { mu: 0.9, ..Default::default() };
        let rows =
            per_iteration_cost_probe(&[Method::Cdt, Method::Beso], &[vec![12, 6], vec![16, 8]], &cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].method, Method::Cdt);
        assert_eq!(rows[3].n_elements, 128);
        assert!(rows.iter().all(|r| r.outer_iters > 0 && r.total_ms >= 0.0));
    }
}
