use approx::assert_abs_diff_eq;
use icem_core::charpoly::{coeffs_from_moments, moments_from_coeffs};
use icem_core::locc::is_majorized_by;
use icem_core::measures::{icem_pure, CoefficientScheme};
use icem_core::state::{
    partial_trace, partial_trace_pure, random_pure_state, random_reduced_spectrum, random_unitary, schmidt_decompose,
    trace_powers, Bipartition, MomentVector, SchmidtSpectrum, EPS_RANK,
};
use icem_core::swap::simulate_swap_test;
use proptest::prelude::*;

fn spectrum(values: &[f64]) -> SchmidtSpectrum {
    SchmidtSpectrum::new(values, EPS_RANK).unwrap()
}

fn padded_eigenvalues(mut v: Vec<f64>, len: usize) -> Vec<f64> {
    v.resize(len, 0.0);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_marginals_share_a_spectrum(seed in any::<u64>(), da in 2usize..5, db in 2usize..5) {
        let psi = random_pure_state(&[da, db], seed).unwrap();
        let a = partial_trace_pure(&psi, &[0]).unwrap().eigenvalues();
        let b = partial_trace_pure(&psi, &[1]).unwrap().eigenvalues();
        let len = da.max(db);
        for (x, y) in padded_eigenvalues(a, len).iter().zip(padded_eigenvalues(b, len)) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>(), dims in prop::collection::vec(2usize..4, 3)) {
        let psi = random_pure_state(&dims, seed).unwrap();
        let ac = partial_trace_pure(&psi, &[0, 2]).unwrap();
        let stepwise = partial_trace(&ac, &[0]).unwrap();
        let direct = partial_trace_pure(&psi, &[0]).unwrap();
        prop_assert!((stepwise.matrix() - direct.matrix()).iter().all(|z| z.norm() < 1e-12));
        prop_assert!((trace_powers(&ac, 1).unwrap().as_slice()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_unitaries_keep_the_schmidt_spectrum(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let psi = random_pure_state(&[da, db], seed).unwrap();
        let cut = Bipartition::of(2, &[0]).unwrap();
        let before = schmidt_decompose(&psi, &cut, EPS_RANK).unwrap();
        let rotated = psi
            .apply_local(0, &random_unitary(da, seed ^ 1))
            .and_then(|s| s.apply_local(1, &random_unitary(db, seed ^ 2)))
            .unwrap();
        let after = schmidt_decompose(&rotated, &cut, EPS_RANK).unwrap();
        for (x, y) in before.values().iter().zip(after.values()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn measure_ignores_spectrum_order(values in prop::collection::vec(0.01f64..1.0, 2..7), rotate in 0usize..6) {
        let total: f64 = values.iter().sum();
        let sorted: Vec<f64> = values.iter().map(|v| v / total).collect();
        let mut shuffled = sorted.clone();
        shuffled.rotate_left(rotate % sorted.len());
        shuffled.reverse();
        for scheme in [CoefficientScheme::Binomial, CoefficientScheme::Permutation] {
            prop_assert_eq!(
                icem_pure(&spectrum(&sorted), scheme).unwrap().value,
                icem_pure(&spectrum(&shuffled), scheme).unwrap().value
            );
        }
    }

    #[test]
    fn schemes_agree_up_to_rank_two(p in 0.0f64..=1.0) {
        let s = spectrum(&[p, 1.0 - p]);
        let b = icem_pure(&s, CoefficientScheme::Binomial).unwrap().value;
        let q = icem_pure(&s, CoefficientScheme::Permutation).unwrap().value;
        prop_assert!((b - q).abs() < 1e-12);
    }

    #[test]
    fn components_reassemble_the_value(seed in any::<u64>(), d in 2usize..7) {
        let s = spectrum(&random_reduced_spectrum(d, seed).unwrap());
        let report = icem_pure(&s, CoefficientScheme::Binomial).unwrap();
        prop_assert_eq!(report.components[0], 0.0);
        prop_assert_eq!(report.value, report.components.iter().sum::<f64>());
        prop_assert!(report.value >= 0.0 && report.value < 1.0);
    }

    #[test]
    fn either_side_of_a_cut_gives_the_same_value(seed in any::<u64>(), dims in prop::collection::vec(2usize..4, 2..4), mask in 1u64..7) {
        let n = dims.len();
        let mask = 1 + mask % ((1 << n) - 2);
        let psi = random_pure_state(&dims, seed).unwrap();
        let cut = Bipartition::from_mask(n, mask).unwrap();
        let a = icem_pure(&schmidt_decompose(&psi, &cut, EPS_RANK).unwrap(), CoefficientScheme::Binomial).unwrap();
        let b = icem_pure(&schmidt_decompose(&psi, &cut.swapped(), EPS_RANK).unwrap(), CoefficientScheme::Binomial).unwrap();
        prop_assert!((a.value - b.value).abs() < 1e-10);
    }

    #[test]
    fn moments_survive_the_coefficient_roundtrip(seed in any::<u64>(), d in 2usize..9) {
        let lambda = random_reduced_spectrum(d, seed).unwrap();
        let m = MomentVector::from_spectrum(&lambda, d);
        let back = moments_from_coeffs(&coeffs_from_moments(&m).unwrap()).unwrap();
        for (x, y) in back.as_slice().iter().zip(m.as_slice()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn mixing_permutations_moves_down_the_majorization_order(
        seed in any::<u64>(),
        d in 2usize..7,
        mix in prop::collection::vec((0.0f64..1.0, 0usize..720), 1..4),
    ) {
        let y = random_reduced_spectrum(d, seed).unwrap();
        let total: f64 = mix.iter().map(|(w, _)| w).sum::<f64>() + 1e-3;
        let mut x = vec![0.0; d];
        for (w, shift) in &mix {
            for i in 0..d {
                x[(i + shift) % d] += w / total * y[i];
            }
        }
        for i in 0..d {
            x[i] += 1e-3 / total * y[(i + d - 1) % d];
        }
        let (sx, sy) = (spectrum(&x), spectrum(&y));
        prop_assert!(is_majorized_by(&sx, &sy));
        prop_assert!(is_majorized_by(&sy, &sy));
        if is_majorized_by(&sy, &sx) {
            for (a, b) in sx.values().iter().zip(sy.values()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn swap_distribution_is_a_distribution(seed in any::<u64>(), r in 1usize..4) {
        let psi = random_pure_state(&[2, 2], seed).unwrap();
        let out = simulate_swap_test(&psi, &Bipartition::of(2, &[0]).unwrap(), r).unwrap();
        assert_abs_diff_eq!(out.probabilities().iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        prop_assert!(out.probabilities().iter().all(|&p| p >= -1e-12));
    }
}
