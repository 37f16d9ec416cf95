mod common;

use proptest::prelude::*;

use meanforce::divided::{log_first, logarithmic_mean, mean_gap};
use meanforce::mean_force::{MeanForceSolver, ThermalContext};
use meanforce::model::{build_model, ModelKind, ModelParams};
use meanforce::observables::{thermal_point, uncertainty_split, wyd_skew};
use meanforce::operator::{dephase, herm_eig, partial_trace, tensor, DensityMatrix, Subsystem};
use meanforce::work::{ergotropy, ergotropy_split, relative_entropy};

use common::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn divided_differences_are_symmetric_and_bounded(a in 1e-6f64..10.0, b in 1e-6f64..10.0) {
        let l = logarithmic_mean(a, b);
        prop_assert!((l - logarithmic_mean(b, a)).abs() <= 1e-14 * l);
        // geometric ≤ logarithmic ≤ arithmetic
        prop_assert!(l >= (a * b).sqrt() * (1.0 - 1e-12));
        prop_assert!(l <= 0.5 * (a + b) * (1.0 + 1e-12));
        prop_assert!(mean_gap(a, b) >= -1e-14 * (a + b));
        prop_assert!((log_first(a, b) - log_first(b, a)).abs() <= 1e-12 * log_first(a, b).abs());
    }

    #[test]
    fn variance_split_is_nonnegative_and_additive(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, dim);
        let y = random_hermitian(&mut r, dim);
        let s = uncertainty_split(&rho, &y).unwrap();
        prop_assert!(s.quantum >= -1e-12 && s.classical >= -1e-12);
        prop_assert!((s.quantum + s.classical - s.variance).abs() <= 1e-10 * s.variance.max(1e-12));
        // √pq ≤ L(p,q) ≤ ((√p+√q)/2)² pins Q between half and all of the WY skew
        let wy = wyd_skew(&rho, &y, 0.5).unwrap();
        prop_assert!(s.quantum <= wy + 1e-12);
        prop_assert!(s.quantum >= 0.5 * wy - 1e-12);
    }

    #[test]
    fn ergotropy_is_unitarily_invariant_in_pairs(seed in any::<u64>(), dim in 2usize..5) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, dim);
        let h = random_hermitian(&mut r, dim);
        let u = random_unitary(&mut r, dim);
        let w = ergotropy(&rho, &h).unwrap();
        let rho_u = DensityMatrix::new(&(&u * rho.operator()) * &u.adjoint()).unwrap();
        let h_u = &(&u * &h) * &u.adjoint();
        prop_assert!((ergotropy(&rho_u, &h_u).unwrap() - w).abs() < 1e-10);
        let split = ergotropy_split(&rho, &h).unwrap();
        prop_assert!(w >= -1e-12);
        prop_assert!(split.incoherent >= -1e-12 && split.incoherent <= w + 1e-10);
        prop_assert!((split.incoherent + split.coherent - split.total).abs() < 1e-12);
    }

    #[test]
    fn dephasing_never_decreases_entropy(seed in any::<u64>(), dim in 2usize..6) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, dim);
        let h = random_hermitian(&mut r, dim);
        let d = dephase(&rho, &h).unwrap();
        prop_assert!(d.von_neumann_entropy().unwrap() >= rho.von_neumann_entropy().unwrap() - 1e-12);
    }

    #[test]
    fn relative_entropy_is_nonnegative_and_contracts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r, 6);
        let sigma = random_state(&mut r, 6);
        let d = relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(d >= -1e-12);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        // data processing under the partial trace
        let pr = DensityMatrix::new(partial_trace(rho.operator(), (3, 2), Subsystem::System).unwrap()).unwrap();
        let ps = DensityMatrix::new(partial_trace(sigma.operator(), (3, 2), Subsystem::System).unwrap()).unwrap();
        prop_assert!(relative_entropy(&pr, &ps).unwrap() <= d + 1e-10);
    }

    #[test]
    fn partial_trace_of_product_recovers_factors(seed in any::<u64>(), ds in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let a = random_state(&mut r, ds);
        let b = random_state(&mut r, db);
        let ab = tensor(a.operator(), b.operator());
        prop_assert!(partial_trace(&ab, (ds, db), Subsystem::System).unwrap().max_abs_diff(a.operator()) < 1e-13);
        prop_assert!(partial_trace(&ab, (ds, db), Subsystem::Bath).unwrap().max_abs_diff(b.operator()) < 1e-13);
    }

    #[test]
    fn spectral_functions_compose(seed in any::<u64>(), dim in 1usize..7) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, dim);
        let eig = herm_eig(&h).unwrap();
        let exp = eig.map(f64::exp).unwrap();
        let back = herm_eig(&exp).unwrap().map(f64::ln).unwrap();
        prop_assert!(back.max_abs_diff(&h) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn thermal_invariants_hold_for_arbitrary_couplings(
        lambda in 0.0f64..2.0,
        temperature in 0.2f64..5.0,
        jc in any::<bool>(),
    ) {
        let kind = if jc { ModelKind::JaynesCummings } else { ModelKind::TwoQubit };
        let params = ModelParams::defaults(kind).with_n_fock(24).with_lambda(lambda);
        let solver = MeanForceSolver::new(&build_model(&params).unwrap()).unwrap();
        let p = thermal_point(&solver, &ThermalContext::from_temperature(temperature).unwrap()).unwrap();
        prop_assert!(p.flags().is_empty(), "{:?}", p.flags());
        prop_assert!(p.qfi_beta <= p.classical_uncertainty + 1e-10);
        prop_assert!(p.snr_opt <= p.snr_bound + 1e-10);
        prop_assert!(p.ergotropy_hmf.abs() < 1e-10);
        prop_assert!(p.state_route_gap < 1e-10);
    }
}
