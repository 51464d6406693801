use std::sync::Arc;

use super::{Displacement, ElementMatrix, FemError, StructuralModel};
use crate::linalg::{
    conjugate_gradient, norm, reverse_cuthill_mckee, CsrMatrix, CsrPattern, LinalgError, SkylineLayout,
};

/// Target relative residual `‖K u − f‖ / ‖f‖`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Accepted normwise backward error `‖r‖∞ / (‖K‖∞ ‖u‖∞ + ‖f‖∞)`. Designs with
/// parts held only by ersatz material have displacements ~1/E_min larger,
/// and rounding `u` alone then leaves a relative residual far above
/// [`RESIDUAL_TOL`].
pub const BACKWARD_TOL: f64 = 1e-13;
const REFINE_TARGET: f64 = 1e-14;
const MAX_REFINE: usize = 4;

/// Equilibrium solver bound to one model. The reduced sparsity pattern, the
/// element scatter map, the fill-reducing ordering and the factor envelope
/// are computed once; each solve only refills values.
#[derive(Debug, Clone)]
pub struct EquilibriumSolver {
    model: StructuralModel,
    ke: ElementMatrix,
    free: Vec<usize>,
    pattern: Arc<CsrPattern>,
    /// Per element, `ndof²` CSR slots (`usize::MAX` where a dof is fixed).
    slots: Vec<usize>,
    layout: SkylineLayout,
    load: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub displacement: Displacement,
    /// `‖K u − f‖ / ‖f‖` on the free dofs.
    pub relative_residual: f64,
    pub backward_error: f64,
    pub refinement_steps: usize,
    /// True when the direct factorization failed and CG was used.
    pub used_iterative: bool,
}

impl EquilibriumSolver {
    pub fn new(model: &StructuralModel) -> Self {
        let mesh = model.mesh();
        let n_dofs = mesh.n_dofs();
        let free = model.free_dofs();
        let mut reduced = vec![usize::MAX; n_dofs];
        for (r, &d) in free.iter().enumerate() {
            reduced[d] = r;
        }
        let mut rows = vec![Vec::new(); free.len()];
        for e in 0..mesh.n_elements() {
            let dofs: Vec<usize> =
                mesh.edof(e).iter().map(|&d| reduced[d]).filter(|&r| r != usize::MAX).collect();
            for &i in &dofs {
                rows[i].extend_from_slice(&dofs);
            }
        }
        let pattern = Arc::new(CsrPattern::from_rows(rows));
        let k = mesh.element_dofs();
        let mut slots = Vec::with_capacity(mesh.n_elements() * k * k);
        for e in 0..mesh.n_elements() {
            let edof = mesh.edof(e);
            for &a in edof {
                for &b in edof {
                    let (ra, rb) = (reduced[a], reduced[b]);
                    let slot = if ra == usize::MAX || rb == usize::MAX {
                        usize::MAX
                    } else {
                        pattern.slot(ra, rb).expect("element entry in pattern")
                    };
                    slots.push(slot);
                }
            }
        }
        let perm = reverse_cuthill_mckee(&pattern);
        let layout = SkylineLayout::new(pattern.clone(), perm);
        let load = free.iter().map(|&d| model.load()[d]).collect();
        Self {
            model: model.clone(),
            ke: model.material().element_matrix(mesh.spatial_dim()),
            free,
            pattern,
            slots,
            layout,
            load,
        }
    }

    pub fn model(&self) -> &StructuralModel {
        &self.model
    }

    pub fn free_dofs(&self) -> &[usize] {
        &self.free
    }

    pub fn reduced_load(&self) -> &[f64] {
        &self.load
    }

    /// `K(ρ) = Σ [E_min + (E − E_min) ρ_e^penal] K_e` restricted to the free dofs.
    pub fn stiffness(&self, rho: &[f64], penal: f64) -> Result<CsrMatrix, FemError> {
        self.model.check_density(rho)?;
        let mat = self.model.material();
        let ke = self.ke.as_slice();
        let block = ke.len();
        let mut k = CsrMatrix::zeros(self.pattern.clone());
        for (e, &r) in rho.iter().enumerate() {
            let modulus = mat.modulus(r, penal);
            for (&slot, &kv) in self.slots[e * block..(e + 1) * block].iter().zip(ke) {
                if slot != usize::MAX {
                    k.values[slot] += modulus * kv;
                }
            }
        }
        Ok(k)
    }

    pub fn solve(&self, rho: &[f64], penal: f64) -> Result<SolveReport, FemError> {
        let k = self.stiffness(rho, penal)?;
        let f = &self.load;
        let f_norm = norm(f);
        if f_norm == 0.0 {
            return Ok(SolveReport {
                displacement: Displacement::zeros(self.model.mesh().n_dofs()),
                relative_residual: 0.0,
                backward_error: 0.0,
                refinement_steps: 0,
                used_iterative: false,
            });
        }
        let relative = |x: &[f64]| -> (Vec<f64>, f64) {
            let kx = k.mul_vec(x);
            let r: Vec<f64> = f.iter().zip(&kx).map(|(a, b)| a - b).collect();
            let res = norm(&r) / f_norm;
            (r, res)
        };

        let (x, res, steps, iterative) = match self.layout.factorize(&k) {
            Ok(chol) => {
                let mut x = chol.solve(f);
                let (mut r, mut res) = relative(&x);
                let mut steps = 0;
                while res > REFINE_TARGET && steps < MAX_REFINE {
                    let dx = chol.solve(&r);
                    let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
                    let (r_trial, res_trial) = relative(&trial);
                    steps += 1;
                    if res_trial >= res {
                        break;
                    }
                    (x, r, res) = (trial, r_trial, res_trial);
                }
                (x, res, steps, false)
            }
            Err(LinalgError::NotPositiveDefinite { .. }) => {
                let outcome = conjugate_gradient(&k, f, RESIDUAL_TOL, 20 * f.len().max(100))
                    .map_err(|e| breakdown(e.to_string(), f64::NAN))?;
                let (_, res) = relative(&outcome.solution);
                (outcome.solution, res, 0, true)
            }
            Err(e) => return Err(breakdown(e.to_string(), f64::NAN)),
        };
        let backward = {
            let r: Vec<f64> = f.iter().zip(k.mul_vec(&x)).map(|(a, b)| a - b).collect();
            inf_norm(&r) / (matrix_inf_norm(&k) * inf_norm(&x) + inf_norm(f))
        };
        if !(res <= RESIDUAL_TOL || backward <= BACKWARD_TOL) {
            return Err(breakdown(format!("backward error {backward:e} above tolerance"), res));
        }
        let mut u = Displacement::zeros(self.model.mesh().n_dofs());
        for (&d, &xi) in self.free.iter().zip(&x) {
            u.u[d] = xi;
        }
        Ok(SolveReport {
            displacement: u,
            relative_residual: res,
            backward_error: backward,
            refinement_steps: steps,
            used_iterative: iterative,
        })
    }

    /// `‖K(ρ)u − f‖ / ‖f‖` on the free dofs (absolute when `f = 0`).
    pub fn relative_residual(&self, rho: &[f64], penal: f64, u: &Displacement) -> Result<f64, FemError> {
        let k = self.stiffness(rho, penal)?;
        let x: Vec<f64> = self.free.iter().map(|&d| u.u[d]).collect();
        let kx = k.mul_vec(&x);
        let r: Vec<f64> = self.load.iter().zip(&kx).map(|(a, b)| a - b).collect();
        let f_norm = norm(&self.load);
        Ok(if f_norm > 0.0 { norm(&r) / f_norm } else { norm(&r) })
    }
}

fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn matrix_inf_norm(k: &CsrMatrix) -> f64 {
    let p = &k.pattern;
    (0..k.dim())
        .map(|i| k.values[p.row_ptr[i]..p.row_ptr[i + 1]].iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn breakdown(reason: String, residual: f64) -> FemError {
    FemError::SolverBreakdown { reason, residual }
}

/// One-off solve of `K(ρ) u = f`.
pub fn solve_equilibrium(model: &StructuralModel, rho: &[f64], penal: f64) -> Result<Displacement, FemError> {
    EquilibriumSolver::new(model).solve(rho, penal).map(|r| r.displacement)
}
