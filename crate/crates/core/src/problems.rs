//! Benchmark structures with supports and loads placed as in the 88-line
//! (2-D) and 169-line (3-D) educational codes.

use std::fmt;
use std::str::FromStr;

use crate::fem::{FemError, Material, Mesh, StructuralModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Mbb2d,
    Cantilever2d,
    Cantilever3d,
}

impl ProblemKind {
    pub fn spatial_dim(self) -> usize {
        match self {
            ProblemKind::Cantilever3d => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Mbb2d => "mbb",
            ProblemKind::Cantilever2d => "cantilever",
            ProblemKind::Cantilever3d => "cantilever3d",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mbb" | "mbb2d" => Ok(ProblemKind::Mbb2d),
            "cantilever" | "cantilever2d" => Ok(ProblemKind::Cantilever2d),
            "cantilever3d" => Ok(ProblemKind::Cantilever3d),
            other => Err(format!("unknown problem `{other}` (expected mbb, cantilever or cantilever3d)")),
        }
    }
}

/// Problem kind plus grid size and load magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    /// Element counts `[nelx, nely]` or `[nelx, nely, nelz]`.
    pub dims: Vec<usize>,
    pub load: f64,
    pub material: Material,
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind, dims: Vec<usize>) -> Self {
        Self { kind, dims, load: 1.0, material: Material::default() }
    }

    pub fn build(&self) -> Result<StructuralModel, FemError> {
        let want = self.kind.spatial_dim();
        if self.dims.len() != want {
            return Err(FemError::InvalidMesh(format!(
                "{} needs {want} element counts, got {}",
                self.kind,
                self.dims.len()
            )));
        }
        if !(self.load.is_finite() && self.load > 0.0) {
            return Err(FemError::InvalidModel(format!("load magnitude {} must be positive", self.load)));
        }
        let d = &self.dims;
        let model = match self.kind {
            ProblemKind::Mbb2d => build_mbb_with(d[0], d[1], self.material, self.load),
            ProblemKind::Cantilever2d => build_cantilever2d_with(d[0], d[1], self.material, self.load),
            ProblemKind::Cantilever3d => build_cantilever3d_with(d[0], d[1], d[2], self.material, self.load),
        }?;
        Ok(model)
    }
}

/// Half MBB beam: downward unit load at the top-left node, roller supports
/// in x along the left (symmetry) edge, vertical support at the
/// bottom-right node.
pub fn build_mbb(nelx: usize, nely: usize) -> Result<StructuralModel, FemError> {
    build_mbb_with(nelx, nely, Material::default(), 1.0)
}

/// Cantilever clamped along the left edge, downward unit load at the
/// bottom-right node.
pub fn build_cantilever2d(nelx: usize, nely: usize) -> Result<StructuralModel, FemError> {
    build_cantilever2d_with(nelx, nely, Material::default(), 1.0)
}

/// 3-D cantilever clamped on the `x = 0` face with a downward line load of
/// unit total magnitude along the bottom edge of the free end.
pub fn build_cantilever3d(nelx: usize, nely: usize, nelz: usize) -> Result<StructuralModel, FemError> {
    build_cantilever3d_with(nelx, nely, nelz, Material::default(), 1.0)
}

fn build_mbb_with(nelx: usize, nely: usize, material: Material, load: f64) -> Result<StructuralModel, FemError> {
    let mesh = Mesh::new_2d(nelx, nely)?;
    let n = mesh.n_dofs();
    let mut f = vec![0.0; n];
    f[1] = -load;
    let mut fixed: Vec<usize> = (0..=nely).map(|iy| 2 * mesh.node_2d(0, iy)).collect();
    fixed.push(n - 1);
    StructuralModel::new(mesh, material, fixed, f)
}

fn build_cantilever2d_with(
    nelx: usize,
    nely: usize,
    material: Material,
    load: f64,
) -> Result<StructuralModel, FemError> {
    let mesh = Mesh::new_2d(nelx, nely)?;
    let n = mesh.n_dofs();
    let mut f = vec![0.0; n];
    f[2 * mesh.node_2d(nelx, nely) + 1] = -load;
    let fixed = (0..2 * (nely + 1)).collect();
    StructuralModel::new(mesh, material, fixed, f)
}

fn build_cantilever3d_with(
    nelx: usize,
    nely: usize,
    nelz: usize,
    material: Material,
    load: f64,
) -> Result<StructuralModel, FemError> {
    let mesh = Mesh::new_3d(nelx, nely, nelz)?;
    let mut f = vec![0.0; mesh.n_dofs()];
    let per_node = load / (nelz + 1) as f64;
    for k in 0..=nelz {
        f[3 * mesh.node_3d(nelx, 0, k) + 1] = -per_node;
    }
    let mut fixed = Vec::with_capacity(3 * (nely + 1) * (nelz + 1));
    for k in 0..=nelz {
        for j in 0..=nely {
            let node = mesh.node_3d(0, j, k);
            fixed.extend_from_slice(&[3 * node, 3 * node + 1, 3 * node + 2]);
        }
    }
    StructuralModel::new(mesh, material, fixed, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mbb_layout() {
        let m = build_mbb(6, 3).unwrap();
        let nonzero: Vec<_> = m.load().iter().enumerate().filter(|(_, &x)| x != 0.0).collect();
        assert_eq!(nonzero, vec![(1, &-1.0)]);
        assert_eq!(m.fixed_dofs().len(), 3 + 2);
        assert_eq!(*m.fixed_dofs().last().unwrap(), m.mesh().n_dofs() - 1);
    }

    #[test]
    fn cantilever_layout() {
        let m = build_cantilever2d(6, 3).unwrap();
        assert_eq!(m.fixed_dofs().len(), 2 * 4);
        assert_eq!(m.load().iter().filter(|&&x| x != 0.0).count(), 1);
        assert_eq!(m.load()[m.mesh().n_dofs() - 1], -1.0);
    }

    #[test]
    fn cantilever3d_layout() {
        let m = build_cantilever3d(4, 2, 3).unwrap();
        assert_eq!(m.fixed_dofs().len(), 3 * 3 * 4);
        let total: f64 = m.load().iter().sum();
        assert!((total + 1.0).abs() < 1e-15);
        assert_eq!(m.load().iter().filter(|&&x| x != 0.0).count(), 4);
    }

    #[test]
    fn spec_parsing_and_dims() {
        assert_eq!("MBB".parse::<ProblemKind>().unwrap(), ProblemKind::Mbb2d);
        assert!("bridge".parse::<ProblemKind>().is_err());
        assert!(ProblemSpec::new(ProblemKind::Cantilever3d, vec![4, 2]).build().is_err());
        let mut s = ProblemSpec::new(ProblemKind::Mbb2d, vec![4, 2]);
        s.load = 2.0;
        assert_eq!(s.build().unwrap().load()[1], -2.0);
    }
}
