use proptest::prelude::*;
use spin_transfer::{
    bound_report, build_coupling_matrix, eigensystem, eigensystem_numeric, node_probability,
    solve_even_roots, transfer_probability, transfer_probability_even_form,
    transfer_probability_odd_form, ChainSpec,
};

fn even_regime() -> impl Strategy<Value = (usize, f64)> {
    (2usize..=8).prop_flat_map(|h| {
        let n = 2 * h;
        let threshold = (n + 2) as f64 / n as f64;
        (Just(n), (threshold + 0.05)..6.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coupling_matrix_is_symmetric_tridiagonal(n in 2usize..40, d1 in 0.1f64..5.0, d2 in 0.1f64..5.0) {
        let m = build_coupling_matrix(&ChainSpec::with_coupling(n, d1, d2).unwrap());
        let dense = m.to_dense();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(dense[i][j], dense[j][i]);
                if i.abs_diff(j) > 1 {
                    prop_assert_eq!(dense[i][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn probabilities_sum_to_one(n in 2usize..=14, delta in 0.2f64..5.0, t in 0.0f64..200.0) {
        let eig = eigensystem(&ChainSpec::new(n, delta).unwrap()).unwrap();
        let total: f64 = (1..=n).map(|k| node_probability(&eig, k, t).unwrap()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn spectrum_is_symmetric(n in 2usize..=30, delta in 0.2f64..5.0) {
        let spec = ChainSpec::new(n, delta).unwrap();
        let eig = eigensystem_numeric(&build_coupling_matrix(&spec)).unwrap();
        let l = eig.eigenvalues();
        for i in 0..n {
            prop_assert!((l[i] + l[n - 1 - i]).abs() <= 1e-10);
        }
    }

    #[test]
    fn even_form_matches_spectral_sum((n, delta) in even_regime(), t in 0.0f64..100.0) {
        let spec = ChainSpec::new(n, delta).unwrap();
        let roots = solve_even_roots(&spec).unwrap();
        let eig = eigensystem(&spec).unwrap();
        let a = transfer_probability(&eig, t);
        let b = transfer_probability_even_form(&spec, &roots, t).unwrap();
        prop_assert!((a - b).abs() <= 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn odd_form_matches_spectral_sum(h in 1usize..=8, delta in 0.2f64..5.0, t in 0.0f64..100.0) {
        let spec = ChainSpec::new(2 * h + 1, delta).unwrap();
        let eig = eigensystem(&spec).unwrap();
        let a = transfer_probability(&eig, t);
        let b = transfer_probability_odd_form(&spec, t).unwrap();
        prop_assert!((a - b).abs() <= 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn odd_bound_dominates_samples(h in 1usize..=5, delta in 1.0f64..4.0, t in 0.0f64..500.0) {
        let spec = ChainSpec::new(2 * h + 1, delta).unwrap();
        let bound = bound_report(&spec).unwrap().p_bound;
        let eig = eigensystem(&spec).unwrap();
        prop_assert!(transfer_probability(&eig, t) <= bound + 1e-9);
    }
}
