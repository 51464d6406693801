/// Dense symmetric element matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementMatrix {
    n: usize,
    data: Vec<f64>,
}

impl ElementMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Plane-stress bilinear quadrilateral on the unit square, unit modulus.
///
/// Closed form of the 88-line educational code; dof order follows the
/// local node order bottom-left, bottom-right, top-right, top-left.
pub fn element_stiffness_2d(nu: f64) -> ElementMatrix {
    const A11: [[f64; 4]; 4] =
        [[12., 3., -6., -3.], [3., 12., 3., 0.], [-6., 3., 12., -3.], [-3., 0., -3., 12.]];
    const A12: [[f64; 4]; 4] =
        [[-6., -3., 0., 3.], [-3., -6., -3., -6.], [0., -3., -6., 3.], [3., -6., 3., -6.]];
    const B11: [[f64; 4]; 4] =
        [[-4., 3., -2., 9.], [3., -4., -9., 4.], [-2., -9., -4., -3.], [9., 4., -3., -4.]];
    const B12: [[f64; 4]; 4] =
        [[2., -3., 4., -9.], [-3., 2., 9., -2.], [4., 9., 2., 3.], [-9., -2., 3., 2.]];
    let block = |m: &[[f64; 4]; 4], i: usize, j: usize, transpose: bool| {
        if transpose {
            m[j][i]
        } else {
            m[i][j]
        }
    };
    let scale = 1.0 / (1.0 - nu * nu) / 24.0;
    ElementMatrix::from_fn(8, |i, j| {
        let (bi, bj) = (i / 4, j / 4);
        let (li, lj) = (i % 4, j % 4);
        let (a, b) = match (bi, bj) {
            (0, 0) | (1, 1) => (block(&A11, li, lj, false), block(&B11, li, lj, false)),
            (0, 1) => (block(&A12, li, lj, false), block(&B12, li, lj, false)),
            _ => (block(&A12, li, lj, true), block(&B12, li, lj, true)),
        };
        scale * (a + nu * b)
    })
}

/// Trilinear hexahedron on the unit cube, unit modulus, integrated with the
/// 2x2x2 Gauss rule (exact for this element).
#[allow(clippy::needless_range_loop)]
pub fn element_stiffness_3d(nu: f64) -> ElementMatrix {
    const CORNERS: [[f64; 3]; 8] = [
        [-1., -1., -1.],
        [1., -1., -1.],
        [1., 1., -1.],
        [-1., 1., -1.],
        [-1., -1., 1.],
        [1., -1., 1.],
        [1., 1., 1.],
        [-1., 1., 1.],
    ];
    let c = 1.0 / ((1.0 + nu) * (1.0 - 2.0 * nu));
    let (d11, d12, g) = (c * (1.0 - nu), c * nu, 0.5 / (1.0 + nu));
    let mut d = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            d[i][j] = if i == j { d11 } else { d12 };
        }
        d[i + 3][i + 3] = g;
    }

    let gp = 1.0 / 3f64.sqrt();
    let mut k = vec![0.0; 24 * 24];
    for &xi in &[-gp, gp] {
        for &eta in &[-gp, gp] {
            for &zeta in &[-gp, gp] {
                // derivatives with respect to physical coordinates: x = (ξ + 1) / 2
                let mut dn = [[0.0; 3]; 8];
                for (a, c) in CORNERS.iter().enumerate() {
                    let f = [1.0 + xi * c[0], 1.0 + eta * c[1], 1.0 + zeta * c[2]];
                    dn[a] = [
                        2.0 * c[0] * f[1] * f[2] / 8.0,
                        2.0 * c[1] * f[0] * f[2] / 8.0,
                        2.0 * c[2] * f[0] * f[1] / 8.0,
                    ];
                }
                let mut b = [[0.0; 24]; 6];
                for a in 0..8 {
                    let [nx, ny, nz] = dn[a];
                    b[0][3 * a] = nx;
                    b[1][3 * a + 1] = ny;
                    b[2][3 * a + 2] = nz;
                    b[3][3 * a] = ny;
                    b[3][3 * a + 1] = nx;
                    b[4][3 * a + 1] = nz;
                    b[4][3 * a + 2] = ny;
                    b[5][3 * a] = nz;
                    b[5][3 * a + 2] = nx;
                }
                let mut db = [[0.0; 24]; 6];
                for r in 0..6 {
                    for col in 0..24 {
                        db[r][col] = (0..6).map(|s| d[r][s] * b[s][col]).sum();
                    }
                }
                let weight = 1.0 / 8.0; // det J
                for i in 0..24 {
                    for j in 0..24 {
                        k[i * 24 + j] += weight * (0..6).map(|r| b[r][i] * db[r][j]).sum::<f64>();
                    }
                }
            }
        }
    }
    // exact symmetry
    ElementMatrix::from_fn(24, |i, j| 0.5 * (k[i * 24 + j] + k[j * 24 + i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Q4 plane stress on the unit square by 2x2 Gauss quadrature.
    fn gauss_q4(nu: f64) -> Vec<Vec<f64>> {
        let corners = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let c = 1.0 / (1.0 - nu * nu);
        let d = [[c, c * nu, 0.0], [c * nu, c, 0.0], [0.0, 0.0, c * (1.0 - nu) / 2.0]];
        let gp = 1.0 / 3f64.sqrt();
        let mut k = vec![vec![0.0; 8]; 8];
        for xi in [-gp, gp] {
            for eta in [-gp, gp] {
                let mut b = [[0.0; 8]; 3];
                for (a, cc) in corners.iter().enumerate() {
                    let nx = 2.0 * cc[0] * (1.0 + eta * cc[1]) / 4.0;
                    let ny = 2.0 * cc[1] * (1.0 + xi * cc[0]) / 4.0;
                    b[0][2 * a] = nx;
                    b[1][2 * a + 1] = ny;
                    b[2][2 * a] = ny;
                    b[2][2 * a + 1] = nx;
                }
                for i in 0..8 {
                    for j in 0..8 {
                        let mut s = 0.0;
                        for r in 0..3 {
                            for q in 0..3 {
                                s += b[r][i] * d[r][q] * b[q][j];
                            }
                        }
                        k[i][j] += 0.25 * s;
                    }
                }
            }
        }
        k
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn closed_form_matches_quadrature() {
        for nu in [0.0, 0.3, 0.45] {
            let ke = element_stiffness_2d(nu);
            let oracle = gauss_q4(nu);
            for i in 0..8 {
                for j in 0..8 {
                    assert!((ke.get(i, j) - oracle[i][j]).abs() < 1e-14, "nu {nu} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn first_entry() {
        let nu: f64 = 0.3;
        let expected = (0.5 - nu / 6.0) / (1.0 - nu * nu);
        assert!((element_stiffness_2d(nu).get(0, 0) - expected).abs() < 1e-15);
        assert!((expected - 0.494505).abs() < 1e-6);
    }

    #[test]
    fn symmetric() {
        assert_eq!(element_stiffness_2d(0.3).max_asymmetry(), 0.0);
        assert_eq!(element_stiffness_3d(0.3).max_asymmetry(), 0.0);
    }

    #[test]
    fn rigid_translations_and_rotations() {
        let k2 = element_stiffness_2d(0.3);
        let xy = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let tx: Vec<f64> = (0..8).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let rot: Vec<f64> =
            (0..8).map(|i| if i % 2 == 0 { -xy[i / 2][1] } else { xy[i / 2][0] }).collect();
        for mode in [tx, rot] {
            assert!(k2.mul_vec(&mode).iter().all(|r| r.abs() < 1e-14));
        }

        let k3 = element_stiffness_3d(0.3);
        let corners = [
            [0., 0., 0.],
            [1., 0., 0.],
            [1., 1., 0.],
            [0., 1., 0.],
            [0., 0., 1.],
            [1., 0., 1.],
            [1., 1., 1.],
            [0., 1., 1.],
        ];
        // rotation about z then about x
        let rz: Vec<f64> = corners.iter().flat_map(|p| [-p[1], p[0], 0.0]).collect();
        let rx: Vec<f64> = corners.iter().flat_map(|p| [0.0, -p[2], p[1]]).collect();
        for mode in [rz, rx] {
            assert!(k3.mul_vec(&mode).iter().all(|r| r.abs() < 1e-12));
        }
    }

    #[test]
    fn uniaxial_strain_energy() {
        // u_x = x on the unit cube: uᵀKu = D11 = (1 − ν) / ((1 + ν)(1 − 2ν))
        let nu = 0.3;
        let k3 = element_stiffness_3d(nu);
        let right = [false, true, true, false, false, true, true, false];
        let u: Vec<f64> = (0..24).map(|i| if i % 3 == 0 && right[i / 3] { 1.0 } else { 0.0 }).collect();
        let d11 = (1.0 - nu) / ((1.0 + nu) * (1.0 - 2.0 * nu));
        assert!((k3.quadratic_form(&u) - d11).abs() < 1e-12);
    }
}
