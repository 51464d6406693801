use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dualtopo::driver::{run_cdt, CdtConfig};
use dualtopo::fem::EquilibriumSolver;
use dualtopo::problems::{build_cantilever2d, build_cantilever3d, build_mbb};

fn equilibrium(c: &mut Criterion) {
    let mut group = c.benchmark_group("equilibrium");
    for (label, model) in [
        ("mbb 60x20", build_mbb(60, 20).unwrap()),
        ("mbb 120x40", build_mbb(120, 40).unwrap()),
        ("cantilever3d 20x10x4", build_cantilever3d(20, 10, 4).unwrap()),
    ] {
        let solver = EquilibriumSolver::new(&model);
        let rho = vec![1.0; model.n_elements()];
        group.bench_with_input(BenchmarkId::from_parameter(label), &rho, |b, rho| {
            b.iter(|| solver.solve(rho, 1.0).unwrap())
        });
    }
    group.finish();
}

fn full_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_cdt");
    group.sample_size(10);
    let model = build_cantilever2d(40, 16).unwrap();
    let config = CdtConfig::new(0.5, 0.975).unwrap();
    group.bench_function("cantilever 40x16", |b| b.iter(|| run_cdt(&model, &config).unwrap()));
    group.finish();
}

criterion_group!(benches, equilibrium, full_run);
criterion_main!(benches);
