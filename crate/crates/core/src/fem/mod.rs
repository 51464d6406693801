//! Linear elasticity on structured grids: element matrices, density-scaled
//! assembly on the free dofs, the equilibrium solve and element energies.

mod element;
mod mesh;
mod solver;

pub use element::{element_stiffness_2d, element_stiffness_3d, ElementMatrix};
pub use mesh::Mesh;
pub use solver::{solve_equilibrium, EquilibriumSolver, SolveReport, BACKWARD_TOL, RESIDUAL_TOL};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("{what}: expected length {expected}, got {got}")]
    Dimension { what: &'static str, expected: usize, got: usize },
    #[error("density {value} at element {index} is outside [0, 1]")]
    InvalidDensity { index: usize, value: f64 },
    #[error("equilibrium solve failed: {reason} (relative residual {residual:e})")]
    SolverBreakdown { reason: String, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub e: f64,
    pub nu: f64,
    pub e_min: f64,
}

impl Default for Material {
    fn default() -> Self {
        Self { e: 1.0, nu: 0.3, e_min: 1e-9 }
    }
}

impl Material {
    pub fn new(e: f64, nu: f64, e_min: f64) -> Result<Self, FemError> {
        let m = Self { e, nu, e_min };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), FemError> {
        if !(self.e_min > 0.0 && self.e > self.e_min && self.e.is_finite()) {
            return Err(FemError::InvalidMaterial(format!(
                "need E > E_min > 0, got E = {}, E_min = {}",
                self.e, self.e_min
            )));
        }
        if !(0.0..0.5).contains(&self.nu) {
            return Err(FemError::InvalidMaterial(format!("Poisson ratio {} outside [0, 0.5)", self.nu)));
        }
        Ok(())
    }

    /// `E_min + (E − E_min) ρ^penal`.
    pub fn modulus(&self, rho: f64, penal: f64) -> f64 {
        let scaled = if penal == 1.0 { rho } else { rho.powf(penal) };
        self.e_min + (self.e - self.e_min) * scaled
    }

    /// Unit-modulus element matrix for the given spatial dimension.
    pub fn element_matrix(&self, spatial_dim: usize) -> ElementMatrix {
        if spatial_dim == 2 {
            element_stiffness_2d(self.nu)
        } else {
            element_stiffness_3d(self.nu)
        }
    }
}

/// Mesh, material, supports and load of a linear-elastic problem.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralModel {
    mesh: Mesh,
    material: Material,
    fixed_dofs: Vec<usize>,
    load: Vec<f64>,
}

impl StructuralModel {
    /// `fixed_dofs` may be unsorted and contain duplicates. `load` is a dense
    /// vector over all dofs.
    pub fn new(
        mesh: Mesh,
        material: Material,
        mut fixed_dofs: Vec<usize>,
        load: Vec<f64>,
    ) -> Result<Self, FemError> {
        material.validate()?;
        fixed_dofs.sort_unstable();
        fixed_dofs.dedup();
        if fixed_dofs.is_empty() {
            return Err(FemError::InvalidModel("no supports".into()));
        }
        if let Some(&d) = fixed_dofs.last().filter(|&&d| d >= mesh.n_dofs()) {
            return Err(FemError::InvalidModel(format!("fixed dof {d} out of range")));
        }
        if load.len() != mesh.n_dofs() {
            return Err(FemError::Dimension { what: "load", expected: mesh.n_dofs(), got: load.len() });
        }
        if load.iter().any(|f| !f.is_finite()) {
            return Err(FemError::InvalidModel("load is not finite".into()));
        }
        if let Some(&d) = fixed_dofs.iter().find(|&&d| load[d] != 0.0) {
            return Err(FemError::InvalidModel(format!("load applied on fixed dof {d}")));
        }
        Ok(Self { mesh, material, fixed_dofs, load })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    pub fn fixed_dofs(&self) -> &[usize] {
        &self.fixed_dofs
    }

    pub fn load(&self) -> &[f64] {
        &self.load
    }

    pub fn n_elements(&self) -> usize {
        self.mesh.n_elements()
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        let mut fixed = vec![false; self.mesh.n_dofs()];
        for &d in &self.fixed_dofs {
            fixed[d] = true;
        }
        (0..self.mesh.n_dofs()).filter(|&d| !fixed[d]).collect()
    }

    /// Checks a density vector against the mesh.
    pub fn check_density(&self, rho: &[f64]) -> Result<(), FemError> {
        let n = self.n_elements();
        if rho.len() != n {
            return Err(FemError::Dimension { what: "density", expected: n, got: rho.len() });
        }
        match rho.iter().position(|r| !(0.0..=1.0).contains(r)) {
            Some(index) => Err(FemError::InvalidDensity { index, value: rho[index] }),
            None => Ok(()),
        }
    }
}

/// Nodal displacements over all dofs; zero on the supports.
#[derive(Debug, Clone, PartialEq)]
pub struct Displacement {
    pub u: Vec<f64>,
}

impl Displacement {
    pub fn zeros(n_dofs: usize) -> Self {
        Self { u: vec![0.0; n_dofs] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.u
    }

    pub fn element_vector(&self, mesh: &Mesh, e: usize) -> Vec<f64> {
        mesh.edof(e).iter().map(|&d| self.u[d]).collect()
    }
}

fn unit_energies(model: &StructuralModel, u: &Displacement) -> Vec<f64> {
    let mesh = model.mesh();
    let ke = model.material().element_matrix(mesh.spatial_dim());
    (0..mesh.n_elements())
        // K_e is positive semidefinite; a negative value is cancellation noise
        .map(|e| 0.5 * ke.quadratic_form(&u.element_vector(mesh, e)).max(0.0))
        .collect()
}

/// `½ E u_eᵀ K_e u_e` per element: the energy each element would store at
/// full modulus under the current displacement.
pub fn element_energies(model: &StructuralModel, u: &Displacement) -> Vec<f64> {
    let e = model.material().e;
    unit_energies(model, u).into_iter().map(|x| e * x).collect()
}

/// Energy actually stored by each element, `½ E_e(ρ) u_eᵀ K_e u_e`.
pub fn stored_energies(model: &StructuralModel, rho: &[f64], penal: f64, u: &Displacement) -> Vec<f64> {
    let mat = model.material();
    unit_energies(model, u)
        .into_iter()
        .zip(rho)
        .map(|(x, &r)| mat.modulus(r, penal) * x)
        .collect()
}

/// Mean compliance `½ fᵀu`.
pub fn compliance(u: &Displacement, f: &[f64]) -> f64 {
    0.5 * crate::linalg::dot(&u.u, f)
}

/// Strain energy `½ uᵀK(ρ)u`, summed element by element.
pub fn strain_energy(model: &StructuralModel, rho: &[f64], penal: f64, u: &Displacement) -> f64 {
    stored_energies(model, rho, penal, u).iter().sum()
}
