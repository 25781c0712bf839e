use approx::assert_abs_diff_eq;
use spin_transfer::verify::run_verification;
use spin_transfer::{
    dwell_window, eigensystem, first_peak, fixed_time_optimize, optimize_delta, sample_curve,
    table1_sweep, ChainSpec, Error,
};

#[test]
fn optimized_ratios_for_short_even_chains() {
    for (n, delta, floor) in [(4, 2.272, 0.998), (6, 2.373, 0.996), (8, 2.557, 0.988)] {
        let triad = optimize_delta(n, 2.0, 3.0).unwrap();
        assert_abs_diff_eq!(triad.delta_h, delta, epsilon = 0.02);
        assert!(triad.p_h > floor, "N={n}: p_h = {}", triad.p_h);
    }
}

#[test]
fn fixed_time_optimum_for_eight_sites() {
    let triad = fixed_time_optimize(8, 60.0, 2.0, 3.0).unwrap();
    assert_abs_diff_eq!(triad.delta_h, 2.510, epsilon = 0.01);
    assert_abs_diff_eq!(triad.p_h, 0.973, epsilon = 0.002);
    assert_eq!(triad.t_h, 60.0);
}

#[test]
fn first_peaks_at_optimal_ratios() {
    for (n, delta, t, p) in [(6, 2.373, 21.428, 0.997), (8, 2.557, 58.966, 0.989)] {
        let triad = first_peak(&ChainSpec::new(n, delta).unwrap()).unwrap();
        assert_abs_diff_eq!(triad.t_h, t, epsilon = 0.01);
        assert_abs_diff_eq!(triad.p_h, p, epsilon = 0.001);
    }
}

#[test]
fn optimizer_rejects_out_of_regime_ranges() {
    assert!(optimize_delta(6, 1.2, 3.0).is_err());
    assert!(optimize_delta(5, 2.0, 3.0).is_err());
    assert!(optimize_delta(4, 3.0, 2.0).is_err());
}

#[test]
fn sweep_validates_lengths_and_sorts_rows() {
    assert!(matches!(table1_sweep(1.4, &[4, 8]), Err(Error::Regime(_))));
    assert!(matches!(table1_sweep(2.38, &[4, 5]), Err(Error::Domain(_))));
    let rows = table1_sweep(2.38, &[6, 4, 6]).unwrap();
    let ns: Vec<usize> = rows.iter().map(|r| r.n_sites).collect();
    assert_eq!(ns, [4, 6]);
    assert!(rows.iter().all(|r| r.peak.is_ok()));
}

#[test]
fn dwell_window_brackets_the_peak() {
    let eig = eigensystem(&ChainSpec::new(4, 2.272).unwrap()).unwrap();
    let curve = sample_curve(&eig, 4, 30.0, 3000).unwrap();
    let w = dwell_window(&curve, 0.9).unwrap().unwrap();
    assert!(w.contains(8.303));
    assert!(w.width() > 0.0 && w.width() < 3.0);
}

#[test]
fn verification_suite_passes() {
    let outcomes = run_verification(|_| {});
    for o in &outcomes {
        assert!(o.passed, "{}: {}", o.name, o.detail);
    }
    assert_eq!(outcomes.len(), spin_transfer::verify::CHECKS.len());
}
