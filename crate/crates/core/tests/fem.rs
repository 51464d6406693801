mod common;

use common::{assemble_dense, patch_test, zero_modes};
use dualtopo::fem::{
    compliance, element_stiffness_2d, element_stiffness_3d, strain_energy, EquilibriumSolver, Mesh,
};
use dualtopo::problems::{build_cantilever2d, build_cantilever3d, build_mbb};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn element_spectra_have_rigid_body_modes_only() {
    for nu in [0.0, 0.3, 0.45] {
        let (z2, min2) = zero_modes(&element_stiffness_2d(nu), 1e-10);
        let (z3, min3) = zero_modes(&element_stiffness_3d(nu), 1e-10);
        assert_eq!((z2, z3), (3, 6), "nu = {nu}");
        assert!(min2 > 0.0 && min3 > 0.0);
    }
}

#[test]
fn patch_tests_reproduce_constant_strain() {
    let ke = element_stiffness_2d(0.3);
    let mesh = Mesh::new_2d(5, 4).unwrap();
    for grad in [
        [[1e-3, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0; 3]],
        [[0.0, 2e-3, 0.0], [2e-3, 0.0, 0.0], [0.0; 3]],
        [[0.7, -0.2, 0.0], [0.4, -1.1, 0.0], [0.0; 3]],
    ] {
        assert!(patch_test(&mesh, &ke, grad) <= 1e-10);
    }
    let ke = element_stiffness_3d(0.3);
    let mesh = Mesh::new_3d(3, 3, 3).unwrap();
    let grad = [[0.3, -0.1, 0.2], [0.05, -0.4, 0.1], [0.2, 0.15, 0.6]];
    assert!(patch_test(&mesh, &ke, grad) <= 1e-10);
}

#[test]
fn sparse_solve_matches_dense_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for model in [build_mbb(9, 5).unwrap(), build_cantilever3d(4, 2, 2).unwrap()] {
        let mesh = model.mesh();
        let rho: Vec<f64> = (0..model.n_elements()).map(|_| rng.gen_range(0.05..1.0)).collect();
        let penal = 3.0;
        let moduli: Vec<f64> = rho.iter().map(|&r| model.material().modulus(r, penal)).collect();
        let k = assemble_dense(mesh, &model.material().element_matrix(mesh.spatial_dim()), &moduli);
        let free = model.free_dofs();
        let kff = k.select_rows(&free).select_columns(&free);
        let f = DVector::from_iterator(free.len(), free.iter().map(|&d| model.load()[d]));
        let dense = kff.cholesky().unwrap().solve(&f);

        let report = EquilibriumSolver::new(&model).solve(&rho, penal).unwrap();
        let u = &report.displacement;
        let scale = dense.amax();
        for (r, &d) in free.iter().enumerate() {
            assert!((u.u[d] - dense[r]).abs() <= 1e-9 * scale);
        }
        for &d in model.fixed_dofs() {
            assert_eq!(u.u[d], 0.0);
        }
        assert!(report.relative_residual <= 1e-10);
    }
}

#[test]
fn energy_identity_on_random_designs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for model in [build_mbb(30, 10).unwrap(), build_cantilever2d(24, 12).unwrap(), build_cantilever3d(8, 4, 3).unwrap()] {
        let solver = EquilibriumSolver::new(&model);
        for _ in 0..5 {
            let rho: Vec<f64> = (0..model.n_elements()).map(|_| if rng.gen_bool(0.7) { 1.0 } else { rng.gen_range(0.0..1.0) }).collect();
            let u = solver.solve(&rho, 3.0).unwrap().displacement;
            let c = compliance(&u, model.load());
            let se = strain_energy(&model, &rho, 3.0, &u);
            assert!((c - se).abs() <= 1e-8 * c, "{c} vs {se}");
        }
    }
}

#[test]
fn adding_material_never_increases_compliance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = build_cantilever2d(12, 6).unwrap();
    let solver = EquilibriumSolver::new(&model);
    let mut rho: Vec<f64> = (0..model.n_elements()).map(|_| rng.gen_range(0.2..0.9)).collect();
    let mut c = compliance(&solver.solve(&rho, 3.0).unwrap().displacement, model.load());
    for _ in 0..30 {
        let e = rng.gen_range(0..rho.len());
        rho[e] = (rho[e] + rng.gen_range(0.0..0.5)).min(1.0);
        let next = compliance(&solver.solve(&rho, 3.0).unwrap().displacement, model.load());
        assert!(next <= c * (1.0 + 1e-12), "{next} > {c}");
        c = next;
    }
}

#[test]
fn full_and_void_designs_scale_with_modulus() {
    let model = build_mbb(10, 4).unwrap();
    let solver = EquilibriumSolver::new(&model);
    let n = model.n_elements();
    let solid = compliance(&solver.solve(&vec![1.0; n], 3.0).unwrap().displacement, model.load());
    let void = compliance(&solver.solve(&vec![0.0; n], 3.0).unwrap().displacement, model.load());
    let ratio = model.material().e / model.material().e_min;
    assert!((void / solid - ratio).abs() <= 1e-6 * ratio);
}
