use dualtopo::knapsack::{
    brute_force, existence_check, lagrangian_bound, sigma_from_theta, solve, KnapsackParams,
};
use dualtopo::{BinaryDensity, KnapsackInstance};
use proptest::prelude::*;

fn equal_volume_instance() -> impl Strategy<Value = KnapsackInstance> {
    (3usize..=14)
        .prop_flat_map(|n| (prop::collection::vec(1e-3f64..1.0, n), 0.0f64..=1.0))
        .prop_map(|(w, frac)| {
            let n = w.len();
            KnapsackInstance::new(w, vec![1.0 / n as f64; n], frac).unwrap()
        })
}

fn tied_instance() -> impl Strategy<Value = KnapsackInstance> {
    (4usize..=12)
        .prop_flat_map(|n| (prop::collection::vec(1u8..=3, n), 1usize..n))
        .prop_map(|(levels, k)| {
            let n = levels.len();
            let w = levels.iter().map(|&l| f64::from(l) / 3.0).collect();
            KnapsackInstance::new(w, vec![1.0; n], k as f64).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn equal_volumes_match_brute_force(inst in equal_volume_instance()) {
        let sol = solve(&inst, &KnapsackParams::default()).unwrap();
        let oracle = brute_force(&inst).unwrap();
        prop_assert!(sol.density.volume(inst.volumes()) <= inst.budget() * (1.0 + 1e-12) + 1e-15);
        prop_assert_eq!(sol.density.gain(inst.gains()), oracle.objective);
        prop_assert!(oracle.contains(&sol.density));
    }

    #[test]
    fn ties_resolve_to_one_of_the_optima(inst in tied_instance()) {
        let sol = solve(&inst, &KnapsackParams::default()).unwrap();
        let oracle = brute_force(&inst).unwrap();
        prop_assert!(oracle.contains(&sol.density), "{:?} not among {} optima", sol.density, oracle.optima.len());
    }

    #[test]
    fn unique_unequal_instances_match(
        wv in prop::collection::vec((1e-2f64..1.0, 0.1f64..1.0), 3..=12),
        k in 1usize..12,
    ) {
        let (w, v): (Vec<f64>, Vec<f64>) = wv.into_iter().unzip();
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by(|&a, &b| (w[b] / v[b]).total_cmp(&(w[a] / v[a])));
        let budget: f64 = order.iter().take(k.min(w.len() - 1)).map(|&e| v[e]).sum();
        let inst = KnapsackInstance::new(w, v, budget).unwrap();
        let report = existence_check(&inst, 1e-12);
        prop_assume!(report.unique);
        let params = KnapsackParams { perturb: false, ..KnapsackParams::default() };
        let sol = solve(&inst, &params).unwrap();
        let oracle = brute_force(&inst).unwrap();
        prop_assert!(oracle.contains(&sol.density));
    }

    #[test]
    fn lagrangian_bound_dominates_every_feasible_set(
        inst in equal_volume_instance(),
        tau in 0.0f64..20.0,
        bits in prop::collection::vec(any::<bool>(), 14),
    ) {
        let rho = BinaryDensity::from_bools(bits.into_iter().take(inst.len()));
        prop_assume!(rho.volume(inst.volumes()) <= inst.budget());
        prop_assert!(lagrangian_bound(&inst, tau, inst.budget()) >= rho.gain(inst.gains()) - 1e-12);
    }

    #[test]
    fn cubic_root_is_positive_and_monotone(theta in -1e3f64..1e3, beta in 1e-2f64..1e3) {
        prop_assume!(theta.abs() > 1e-9);
        let s = sigma_from_theta(theta, beta).unwrap();
        prop_assert!(s > 0.0 && s <= theta.abs() * (1.0 + 1e-12));
        let r = 2.0 * s.powi(3) / beta + s * s - theta * theta;
        prop_assert!(r.abs() <= 1e-9 * theta.powi(2).max(1.0));
        let s2 = sigma_from_theta(theta * 1.5, beta).unwrap();
        prop_assert!(s2 > s);
        prop_assert_eq!(s, sigma_from_theta(-theta, beta).unwrap());
    }
}

#[test]
fn solver_is_deterministic() {
    let w: Vec<f64> = (0..40).map(|i| ((i * 37 % 41) as f64 + 1.0) / 41.0).collect();
    let inst = KnapsackInstance::with_unit_total_volume(w, 0.35).unwrap();
    let a = solve(&inst, &KnapsackParams::default()).unwrap();
    let b = solve(&inst, &KnapsackParams::default()).unwrap();
    assert_eq!(a.density, b.density);
    assert_eq!(a.certificate.objective, b.certificate.objective);
    assert!(a.certificate.bound_gap.abs() <= 1e-12 * a.certificate.objective.abs().max(1.0));
}
