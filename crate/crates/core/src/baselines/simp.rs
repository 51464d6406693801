use std::time::Instant;

use crate::driver::{DriverError, IterationLog, Method, RunRecord};
use crate::fem::{compliance, strain_energy, Displacement, EquilibriumSolver, Mesh, StructuralModel};

/// Lower bound on SIMP densities.
pub const DENSITY_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SimpConfig {
    pub penal: f64,
    /// Sensitivity filter radius in element widths.
    pub rmin: f64,
    pub move_limit: f64,
    /// Exponent of the optimality-criteria update.
    pub eta: f64,
    /// Stop when the largest density change falls below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SimpConfig {
    fn default() -> Self {
        Self { penal: 3.0, rmin: 1.5, move_limit: 0.2, eta: 0.5, tol: 1e-2, max_iters: 1000 }
    }
}

impl SimpConfig {
    pub fn validate(&self) -> Result<(), DriverError> {
        if !(self.penal >= 1.0) || !(self.rmin >= 1.0) {
            return Err(DriverError::Config(format!(
                "penal = {} and rmin = {} must both be at least 1",
                self.penal, self.rmin
            )));
        }
        if !(self.move_limit > 0.0 && self.eta > 0.0 && self.tol > 0.0) || self.max_iters == 0 {
            return Err(DriverError::Config("move limit, eta, tol and max_iters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimpRun {
    pub density: Vec<f64>,
    pub displacement: Displacement,
    pub record: RunRecord,
    /// `½ fᵀu` at the final densities.
    pub compliance: f64,
    pub strain_energy: f64,
}

impl SimpRun {
    /// Elements with `0.01 < ρ < 0.99`.
    pub fn gray_count(&self) -> usize {
        gray_count(&self.density)
    }

    pub fn volume(&self, model: &StructuralModel) -> f64 {
        self.density.iter().zip(model.mesh().volumes()).map(|(r, v)| r * v).sum()
    }
}

pub fn gray_count(rho: &[f64]) -> usize {
    rho.iter().filter(|&&r| r > 0.01 && r < 0.99).count()
}

/// Cone-weighted neighbourhood filter `H` with row sums `Hs`.
#[derive(Debug, Clone)]
pub struct SensitivityFilter {
    neighbours: Vec<Vec<(usize, f64)>>,
    row_sums: Vec<f64>,
}

impl SensitivityFilter {
    pub fn new(mesh: &Mesh, rmin: f64) -> Self {
        let reach = rmin.ceil() as isize - 1;
        let dims = [mesh.nelx() as isize, mesh.nely() as isize, mesh.nelz() as isize];
        let reach_z = if mesh.spatial_dim() == 3 { reach } else { 0 };
        let mut neighbours = Vec::with_capacity(mesh.n_elements());
        for e in 0..mesh.n_elements() {
            let c = mesh.element_coords(e).map(|x| x as isize);
            let mut list = Vec::new();
            for dz in -reach_z..=reach_z {
                for dx in -reach..=reach {
                    for dy in -reach..=reach {
                        let (x, y, z) = (c[0] + dx, c[1] + dy, c[2] + dz);
                        if x < 0 || y < 0 || z < 0 || x >= dims[0] || y >= dims[1] || z >= dims[2] {
                            continue;
                        }
                        let weight = rmin - ((dx * dx + dy * dy + dz * dz) as f64).sqrt();
                        if weight > 0.0 {
                            let j = if mesh.spatial_dim() == 3 {
                                mesh.element_3d(x as usize, y as usize, z as usize)
                            } else {
                                mesh.element_2d(x as usize, y as usize)
                            };
                            list.push((j, weight));
                        }
                    }
                }
            }
            neighbours.push(list);
        }
        let row_sums = neighbours.iter().map(|l| l.iter().map(|(_, w)| w).sum()).collect();
        Self { neighbours, row_sums }
    }

    /// `dc ← H (x ∘ dc) / Hs / max(floor, x)`.
    pub fn apply(&self, x: &[f64], dc: &[f64]) -> Vec<f64> {
        self.neighbours
            .iter()
            .zip(&self.row_sums)
            .enumerate()
            .map(|(e, (list, hs))| {
                let s: f64 = list.iter().map(|&(j, w)| w * x[j] * dc[j]).sum();
                s / hs / x[e].max(DENSITY_FLOOR)
            })
            .collect()
    }
}

/// Optimality-criteria update with bisection on the volume multiplier.
fn oc_update(x: &[f64], dc: &[f64], volfrac: f64, cfg: &SimpConfig) -> Vec<f64> {
    let n = x.len() as f64;
    let (mut l1, mut l2) = (0.0f64, 1e9f64);
    let mut x_new = x.to_vec();
    while (l2 - l1) / (l1 + l2) > 1e-9 {
        let lmid = 0.5 * (l1 + l2);
        for (xn, (&xe, &d)) in x_new.iter_mut().zip(x.iter().zip(dc)) {
            let candidate = xe * (-d / lmid).max(0.0).powf(cfg.eta);
            *xn = candidate
                .min(xe + cfg.move_limit)
                .min(1.0)
                .max(xe - cfg.move_limit)
                .max(DENSITY_FLOOR);
        }
        if x_new.iter().sum::<f64>() > volfrac * n {
            l1 = lmid;
        } else {
            l2 = lmid;
        }
    }
    x_new
}

/// SIMP with the optimality-criteria update and a sensitivity filter.
/// Hitting `max_iters` is reported through `record.converged`, not as an
/// error.
pub fn run_simp(model: &StructuralModel, volfrac: f64, config: &SimpConfig) -> Result<SimpRun, DriverError> {
    config.validate()?;
    if !(volfrac > 0.0 && volfrac <= 1.0) {
        return Err(DriverError::Config(format!("volfrac = {volfrac} must lie in (0, 1]")));
    }
    let mesh = model.mesh();
    let n = mesh.n_elements();
    let mat = *model.material();
    let ke = mat.element_matrix(mesh.spatial_dim());
    let filter = SensitivityFilter::new(mesh, config.rmin);
    let solver = EquilibriumSolver::new(model);
    let v = mesh.element_volume();

    let mut x = vec![volfrac; n];
    let mut record = RunRecord::new(Method::Simp);
    let mut report = solver.solve(&x, config.penal).map_err(|source| DriverError::Fem { gamma: 1, source })?;
    for it in 1..=config.max_iters {
        let start = Instant::now();
        let u = &report.displacement;
        let dc: Vec<f64> = (0..n)
            .map(|e| {
                let ce = ke.quadratic_form(&u.element_vector(mesh, e)).max(0.0);
                -config.penal * (mat.e - mat.e_min) * x[e].powf(config.penal - 1.0) * ce
            })
            .collect();
        let dc = filter.apply(&x, &dc);
        let select_start = Instant::now();
        let x_new = oc_update(&x, &dc, volfrac, config);
        let select_ms = select_start.elapsed().as_secs_f64() * 1e3;
        let change = x_new.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let changed = x_new.iter().zip(&x).filter(|(a, b)| a != b).count();
        x = x_new;
        report = solver.solve(&x, config.penal).map_err(|source| DriverError::Fem { gamma: it, source })?;
        record.entries.push(IterationLog {
            gamma: it,
            volume_target: volfrac,
            volume: x.iter().sum::<f64>() * v,
            inner_iters: 0,
            compliance: compliance(&report.displacement, model.load()),
            strain_energy: strain_energy(model, &x, config.penal, &report.displacement),
            p_u: None,
            p_dual: None,
            tau_start: None,
            tau: None,
            beta: None,
            perturbed: false,
            changed,
            select_ms,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        if change < config.tol {
            record.converged = true;
            break;
        }
    }
    let compliance = compliance(&report.displacement, model.load());
    let strain_energy = strain_energy(model, &x, config.penal, &report.displacement);
    Ok(SimpRun { density: x, displacement: report.displacement, record, compliance, strain_energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{build_cantilever2d, build_mbb};

    #[test]
    fn filter_weights() {
        let m = Mesh::new_2d(4, 3).unwrap();
        let f = SensitivityFilter::new(&m, 1.5);
        // interior element: itself (1.5), four edge neighbours (0.5), four
        // diagonal ones (1.5 - √2)
        let e = m.element_2d(1, 1);
        assert_eq!(f.neighbours[e].len(), 9);
        assert!((f.row_sums[e] - (3.5 + 4.0 * (1.5 - 2f64.sqrt()))).abs() < 1e-14);
        assert_eq!(f.neighbours[m.element_2d(0, 0)].len(), 4);
        // a constant field is reproduced when x is constant
        let x = vec![0.5; 12];
        let dc = vec![-2.0; 12];
        assert!(f.apply(&x, &dc).iter().all(|d| (d + 2.0).abs() < 1e-14));
    }

    #[test]
    fn oc_hits_volume() {
        let x = vec![0.5; 10];
        let dc: Vec<f64> = (0..10).map(|i| -(i as f64 + 1.0)).collect();
        let x2 = oc_update(&x, &dc, 0.5, &SimpConfig::default());
        assert!((x2.iter().sum::<f64>() / 10.0 - 0.5).abs() < 1e-6);
        assert!(x2.iter().all(|&r| (DENSITY_FLOOR..=1.0).contains(&r)));
    }

    #[test]
    fn full_volume_stays_solid() {
        let m = build_cantilever2d(8, 4).unwrap();
        let run = run_simp(&m, 1.0, &SimpConfig::default()).unwrap();
        assert!(run.density.iter().all(|&r| r > 0.999));
    }

    #[test]
    fn small_mbb_is_gray_and_on_budget() {
        let m = build_mbb(30, 10).unwrap();
        let run = run_simp(&m, 0.5, &SimpConfig::default()).unwrap();
        assert!(run.gray_count() > 0);
        assert!((run.volume(&m) - 0.5).abs() <= 1e-4);
    }
}
