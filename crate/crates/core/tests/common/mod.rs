#![allow(dead_code)]

use dualtopo::fem::{ElementMatrix, Mesh};
use nalgebra::{DMatrix, DVector};

pub fn to_dense(k: &ElementMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(k.size(), k.size(), |i, j| k.get(i, j))
}

/// Eigenvalues at most `rtol · λ_max` in magnitude.
pub fn zero_modes(k: &ElementMatrix, rtol: f64) -> (usize, f64) {
    let eig = to_dense(k).symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let zeros = eig.eigenvalues.iter().filter(|l| l.abs() <= rtol * max).count();
    let min_other = eig.eigenvalues.iter().filter(|l| l.abs() > rtol * max).fold(f64::INFINITY, |m, &l| m.min(l));
    (zeros, min_other)
}

/// Physical coordinates of every node (y up).
pub fn node_coords(mesh: &Mesh) -> Vec<[f64; 3]> {
    let (nelx, nely) = (mesh.nelx(), mesh.nely());
    let mut xyz = vec![[0.0; 3]; mesh.n_nodes()];
    if mesh.spatial_dim() == 2 {
        for ix in 0..=nelx {
            for iy in 0..=nely {
                xyz[mesh.node_2d(ix, iy)] = [ix as f64, (nely - iy) as f64, 0.0];
            }
        }
    } else {
        for k in 0..=mesh.nelz() {
            for i in 0..=nelx {
                for j in 0..=nely {
                    xyz[mesh.node_3d(i, j, k)] = [i as f64, j as f64, k as f64];
                }
            }
        }
    }
    xyz
}

pub fn assemble_dense(mesh: &Mesh, ke: &ElementMatrix, moduli: &[f64]) -> DMatrix<f64> {
    let n = mesh.n_dofs();
    let mut k = DMatrix::zeros(n, n);
    for (e, &m) in moduli.iter().enumerate() {
        let dofs = mesh.edof(e);
        for (a, &i) in dofs.iter().enumerate() {
            for (b, &j) in dofs.iter().enumerate() {
                k[(i, j)] += m * ke.get(a, b);
            }
        }
    }
    k
}

/// Prescribes the linear field `u = G x` on the boundary nodes of a
/// homogeneous patch, solves for the interior nodes, and returns the largest
/// deviation of any nodal displacement and any element-centre strain from
/// the exact values.
pub fn patch_test(mesh: &Mesh, ke: &ElementMatrix, grad: [[f64; 3]; 3]) -> f64 {
    let dim = mesh.spatial_dim();
    let xyz = node_coords(mesh);
    let exact: Vec<f64> = (0..mesh.n_dofs())
        .map(|d| {
            let (node, c) = (d / dim, d % dim);
            (0..dim).map(|j| grad[c][j] * xyz[node][j]).sum()
        })
        .collect();
    let dims = mesh.dims();
    let on_boundary = |p: &[f64; 3]| (0..dim).any(|j| p[j] == 0.0 || p[j] == dims[j] as f64);
    let (mut free, mut fixed) = (Vec::new(), Vec::new());
    for d in 0..mesh.n_dofs() {
        if on_boundary(&xyz[d / dim]) {
            fixed.push(d);
        } else {
            free.push(d);
        }
    }
    let k = assemble_dense(mesh, ke, &vec![1.0; mesh.n_elements()]);
    let kff = k.select_rows(&free).select_columns(&free);
    let kfb = k.select_rows(&free).select_columns(&fixed);
    let ub = DVector::from_iterator(fixed.len(), fixed.iter().map(|&d| exact[d]));
    let uf = kff.cholesky().expect("interior stiffness is SPD").solve(&(-(kfb * ub)));
    let mut u = exact.clone();
    for (r, &d) in free.iter().enumerate() {
        u[d] = uf[r];
    }
    let mut err = free.iter().map(|&d| (u[d] - exact[d]).abs()).fold(0.0, f64::max);

    // trilinear shape gradients at the element centre, local node order
    // bottom-left, bottom-right, top-right, top-left (z = 0 then z = 1)
    let corners: &[[f64; 3]] = &[
        [0., 0., 0.], [1., 0., 0.], [1., 1., 0.], [0., 1., 0.],
        [0., 0., 1.], [1., 0., 1.], [1., 1., 1.], [0., 1., 1.],
    ];
    let nn = if dim == 2 { 4 } else { 8 };
    for e in 0..mesh.n_elements() {
        let dofs = mesh.edof(e);
        let mut g = [[0.0; 3]; 3];
        for (a, c) in corners.iter().take(nn).enumerate() {
            for j in 0..dim {
                let s: f64 = (0..dim).map(|m| if m == j { 1.0 } else { 0.5 }).product();
                let dn = if c[j] == 1.0 { s } else { -s };
                for comp in 0..dim {
                    g[comp][j] += dn * u[dofs[dim * a + comp]];
                }
            }
        }
        for comp in 0..dim {
            for j in 0..dim {
                err = err.max((g[comp][j] - grad[comp][j]).abs());
            }
        }
    }
    err
}

/// Exact 0-1 knapsack for equal volumes by dynamic programming over the
/// number of kept elements. Returns the selection and whether the optimum
/// is unique.
pub fn dp_equal_volume(w: &[f64], volume: f64, budget: f64) -> (Vec<bool>, bool) {
    let n = w.len();
    let cap = ((budget / volume) * (1.0 + 1e-9)).floor().min(n as f64) as usize;
    // best[k] over the elements seen so far; take[i][k] records the choice
    let mut best = vec![f64::NEG_INFINITY; cap + 1];
    best[0] = 0.0;
    let mut take = vec![vec![false; cap + 1]; n];
    let mut tie = vec![vec![false; cap + 1]; n];
    for i in 0..n {
        for k in (1..=cap.min(i + 1)).rev() {
            let with = best[k - 1] + w[i];
            if with > best[k] {
                best[k] = with;
                take[i][k] = true;
            } else if with == best[k] {
                tie[i][k] = true;
            }
        }
    }
    let (mut k, mut top) = (0, 0.0);
    let mut unique = true;
    for (c, &b) in best.iter().enumerate() {
        if b > top {
            (k, top) = (c, b);
            unique = true;
        } else if b == top && c > 0 {
            unique = false;
        }
    }
    let mut keep = vec![false; n];
    for i in (0..n).rev() {
        if k == 0 {
            break;
        }
        unique &= !tie[i][k];
        if take[i][k] {
            keep[i] = true;
            k -= 1;
        }
    }
    (keep, unique)
}
