use super::FemError;

/// Structured grid of unit square (2-D) or unit cube (3-D) elements.
///
/// 2-D numbering: nodes column by column with y pointing down, node
/// `(ix, iy)` has id `(nely + 1) * ix + iy`; element `(elx, ely)` has id
/// `ely + elx * nely`. 3-D adds layers in z: node `(i, j, k)` with `j`
/// counted upward from the bottom has id `k (nelx+1)(nely+1) + i (nely+1) +
/// (nely - j)`, element `(elx, ely, elz)` has id `elz nelx nely + elx nely +
/// ely`. Local node order inside an element is bottom-left, bottom-right,
/// top-right, top-left (then the same on the next z layer).
///
/// Every element carries the volume `1 / n`, so the full domain has unit
/// volume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    dims: Vec<usize>,
    edofs: Vec<usize>,
}

impl Mesh {
    pub fn new_2d(nelx: usize, nely: usize) -> Result<Self, FemError> {
        if nelx == 0 || nely == 0 {
            return Err(FemError::InvalidMesh(format!("element counts must be positive, got {nelx}x{nely}")));
        }
        let mut edofs = Vec::with_capacity(8 * nelx * nely);
        for elx in 0..nelx {
            for ely in 0..nely {
                let n1 = (nely + 1) * elx + ely;
                let n2 = (nely + 1) * (elx + 1) + ely;
                edofs.extend_from_slice(&[
                    2 * n1 + 2,
                    2 * n1 + 3,
                    2 * n2 + 2,
                    2 * n2 + 3,
                    2 * n2,
                    2 * n2 + 1,
                    2 * n1,
                    2 * n1 + 1,
                ]);
            }
        }
        Ok(Self { dims: vec![nelx, nely], edofs })
    }

    pub fn new_3d(nelx: usize, nely: usize, nelz: usize) -> Result<Self, FemError> {
        if nelx == 0 || nely == 0 || nelz == 0 {
            return Err(FemError::InvalidMesh(format!(
                "element counts must be positive, got {nelx}x{nely}x{nelz}"
            )));
        }
        let layer = (nelx + 1) * (nely + 1);
        let mut edofs = Vec::with_capacity(24 * nelx * nely * nelz);
        for elz in 0..nelz {
            for elx in 0..nelx {
                for ely in 0..nely {
                    let base = elz * layer;
                    let quad = [
                        base + elx * (nely + 1) + ely + 1,
                        base + (elx + 1) * (nely + 1) + ely + 1,
                        base + (elx + 1) * (nely + 1) + ely,
                        base + elx * (nely + 1) + ely,
                    ];
                    for shift in [0, layer] {
                        for &node in &quad {
                            let n = node + shift;
                            edofs.extend_from_slice(&[3 * n, 3 * n + 1, 3 * n + 2]);
                        }
                    }
                }
            }
        }
        Ok(Self { dims: vec![nelx, nely, nelz], edofs })
    }

    /// Element counts per axis.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn spatial_dim(&self) -> usize {
        self.dims.len()
    }

    pub fn nelx(&self) -> usize {
        self.dims[0]
    }

    pub fn nely(&self) -> usize {
        self.dims[1]
    }

    pub fn nelz(&self) -> usize {
        self.dims.get(2).copied().unwrap_or(1)
    }

    pub fn n_elements(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn n_nodes(&self) -> usize {
        self.dims.iter().map(|d| d + 1).product()
    }

    pub fn n_dofs(&self) -> usize {
        self.spatial_dim() * self.n_nodes()
    }

    /// Degrees of freedom per element (8 or 24).
    pub fn element_dofs(&self) -> usize {
        if self.spatial_dim() == 2 {
            8
        } else {
            24
        }
    }

    pub fn edof(&self, e: usize) -> &[usize] {
        let k = self.element_dofs();
        &self.edofs[k * e..k * (e + 1)]
    }

    pub fn element_volume(&self) -> f64 {
        1.0 / self.n_elements() as f64
    }

    pub fn volumes(&self) -> Vec<f64> {
        vec![self.element_volume(); self.n_elements()]
    }

    pub fn node_2d(&self, ix: usize, iy: usize) -> usize {
        (self.nely() + 1) * ix + iy
    }

    /// Node id with `j` measured upward from the bottom face.
    pub fn node_3d(&self, i: usize, j: usize, k: usize) -> usize {
        k * (self.nelx() + 1) * (self.nely() + 1) + i * (self.nely() + 1) + (self.nely() - j)
    }

    /// Grid position `[elx, ely, elz]` of element `e` (`elz = 0` in 2-D).
    pub fn element_coords(&self, e: usize) -> [usize; 3] {
        let (nelx, nely) = (self.nelx(), self.nely());
        let layer = nelx * nely;
        let (elz, rem) = (e / layer, e % layer);
        [rem / nely, rem % nely, elz]
    }

    pub fn element_2d(&self, elx: usize, ely: usize) -> usize {
        ely + elx * self.nely()
    }

    pub fn element_3d(&self, elx: usize, ely: usize, elz: usize) -> usize {
        elz * self.nelx() * self.nely() + elx * self.nely() + ely
    }
}
