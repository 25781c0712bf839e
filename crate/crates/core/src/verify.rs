//! Oracle and invariant checks across every module, run as one suite.

use std::f64::consts::PI;
use std::time::Instant;

use crate::bounds::{bound_report, r_value};
use crate::chain::{build_coupling_matrix, ChainSpec};
use crate::dynamics::{
    node_probability, transfer_probability, transfer_probability_even_form,
    transfer_probability_odd_form, Propagator,
};
use crate::ideal::{ideal_solutions, n4_frequencies, n4_probability, IDEAL_TOL};
use crate::oracle::FullSpaceOracle;
use crate::search::{first_peak, optimize_delta};
use crate::spectral::{
    eigensystem, eigensystem_even, eigensystem_numeric, eigensystem_odd, solve_even_roots,
    x_residual, x_residual_tol, y_residual_relative, EigenSystem,
};

pub const EVEN_GRID_SITES: [usize; 7] = [4, 6, 8, 10, 12, 14, 16];
pub const EVEN_GRID_DELTAS: [f64; 3] = [2.0, 2.38, 3.0];
pub const ODD_GRID_SITES: [usize; 7] = [3, 5, 7, 9, 11, 13, 15];
pub const ODD_GRID_DELTAS: [f64; 3] = [1.0, 1.5, 2.0];
/// Optimal `(N, delta_h)` points for short even chains.
pub const OPTIMAL_RATIOS: [(usize, f64); 3] = [(4, 2.272), (6, 2.373), (8, 2.557)];

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spec(n: usize, delta: f64) -> Result<ChainSpec, String> {
    ChainSpec::new(n, delta).map_err(|e| e.to_string())
}

fn numeric(s: &ChainSpec) -> Result<EigenSystem, String> {
    eigensystem_numeric(&build_coupling_matrix(s)).map_err(|e| e.to_string())
}

fn check_eigen_invariants(eig: &EigenSystem, s: &ChainSpec, label: &str) -> Result<(), String> {
    let m = build_coupling_matrix(s);
    let res = eig.residual(&m);
    ensure(res <= 1e-9 * m.max_abs_entry(), || {
        format!("{label} N={} delta={}: residual {res:e}", s.n_sites(), s.delta())
    })?;
    let orth = eig.orthonormality_error();
    ensure(orth <= 1e-10, || {
        format!("{label} N={} delta={}: orthonormality {orth:e}", s.n_sites(), s.delta())
    })?;
    let mut neg: Vec<f64> = eig.eigenvalues().iter().map(|l| -l).collect();
    neg.reverse();
    let pairing = eig
        .eigenvalues()
        .iter()
        .zip(&neg)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(pairing <= 1e-10, || {
        format!("{label} N={} delta={}: spectrum not symmetric ({pairing:e})", s.n_sites(), s.delta())
    })
}

fn spectral_agreement() -> Result<String, String> {
    let mut worst = (0.0_f64, 0.0_f64);
    for n in EVEN_GRID_SITES {
        for delta in EVEN_GRID_DELTAS {
            let s = spec(n, delta)?;
            let a = eigensystem_even(&s).map_err(|e| e.to_string())?;
            let b = numeric(&s)?;
            check_eigen_invariants(&a, &s, "analytic-even")?;
            check_eigen_invariants(&b, &s, "numeric")?;
            let (dv, du) = a.deviation_from(&b);
            ensure(dv <= 1e-9 && du <= 1e-8, || {
                format!("even N={n} delta={delta}: eigenvalue dev {dv:e}, vector dev {du:e}")
            })?;
            worst = (worst.0.max(dv), worst.1.max(du));
        }
    }
    for n in ODD_GRID_SITES {
        for delta in ODD_GRID_DELTAS {
            let s = spec(n, delta)?;
            let a = eigensystem_odd(&s).map_err(|e| e.to_string())?;
            let b = numeric(&s)?;
            check_eigen_invariants(&a, &s, "analytic-odd")?;
            check_eigen_invariants(&b, &s, "numeric")?;
            let (dv, du) = a.deviation_from(&b);
            ensure(dv <= 1e-9 && du <= 1e-8, || {
                format!("odd N={n} delta={delta}: eigenvalue dev {dv:e}, vector dev {du:e}")
            })?;
            worst = (worst.0.max(dv), worst.1.max(du));
        }
    }
    Ok(format!("max eigenvalue dev {:.2e}, max vector dev {:.2e}", worst.0, worst.1))
}

fn even_roots() -> Result<String, String> {
    for n in EVEN_GRID_SITES {
        for delta in EVEN_GRID_DELTAS {
            let s = spec(n, delta)?;
            let half = n / 2;
            let samples = 10 * n;
            let changes = (1..samples - 1)
                .filter(|&i| {
                    let a = x_residual(delta, half, PI * i as f64 / samples as f64);
                    let b = x_residual(delta, half, PI * (i + 1) as f64 / samples as f64);
                    a.signum() != b.signum()
                })
                .count();
            ensure(changes == half - 1, || {
                format!("N={n} delta={delta}: {changes} sign changes, expected {}", half - 1)
            })?;
            let r = solve_even_roots(&s).map_err(|e| e.to_string())?;
            for &x in &r.x_roots {
                let res = x_residual(delta, half, x).abs();
                let tol = x_residual_tol(delta, half);
                ensure(res <= tol, || format!("N={n} delta={delta}: x residual {res:e}"))?;
            }
            let res = y_residual_relative(delta, half, r.y_root).abs();
            ensure(res <= 1e-12, || format!("N={n} delta={delta}: y residual {res:e}"))?;
        }
    }
    Ok("root counts and residuals ok".into())
}

fn slow_mode_shrinks() -> Result<String, String> {
    for delta in EVEN_GRID_DELTAS {
        let mut prev = f64::INFINITY;
        for n in EVEN_GRID_SITES {
            let eig = numeric(&spec(n, delta)?)?;
            let lam = eig.lambda_min().ok_or("no positive eigenvalue")?;
            let half_value = eig.eigenvalues()[n / 2 - 1];
            ensure(lam == half_value, || {
                format!("N={n} delta={delta}: lambda_N/2 is not the smallest positive eigenvalue")
            })?;
            ensure(lam < prev, || format!("N={n} delta={delta}: lambda_min {lam} did not decrease"))?;
            prev = lam;
        }
    }
    Ok("lambda_N/2 decreasing in N".into())
}

fn form_equivalence() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in [4, 6, 8, 10, 12] {
        for delta in EVEN_GRID_DELTAS {
            let s = spec(n, delta)?;
            let roots = solve_even_roots(&s).map_err(|e| e.to_string())?;
            let eig = eigensystem_even(&s).map_err(|e| e.to_string())?;
            let prop = Propagator::end_to_end(&eig);
            for i in 0..1000 {
                let t = 0.1 * i as f64;
                let a = prop.probability(t);
                let b = transfer_probability_even_form(&s, &roots, t).map_err(|e| e.to_string())?;
                worst = worst.max((a - b).abs());
                ensure((a - b).abs() <= 1e-10, || {
                    format!("even N={n} delta={delta} t={t}: {a} vs {b}")
                })?;
            }
        }
    }
    for n in ODD_GRID_SITES {
        for delta in ODD_GRID_DELTAS {
            let s = spec(n, delta)?;
            let eig = eigensystem_odd(&s).map_err(|e| e.to_string())?;
            let prop = Propagator::end_to_end(&eig);
            for i in 0..1000 {
                let t = 0.1 * i as f64;
                let a = prop.probability(t);
                let b = transfer_probability_odd_form(&s, t).map_err(|e| e.to_string())?;
                worst = worst.max((a - b).abs());
                ensure((a - b).abs() <= 1e-10, || {
                    format!("odd N={n} delta={delta} t={t}: {a} vs {b}")
                })?;
            }
        }
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn unitarity() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for (n, delta) in [(2, 1.0), (4, 2.272), (5, 1.0), (6, 1.1), (8, 2.557), (9, 0.7), (16, 2.38)] {
        let eig = eigensystem(&spec(n, delta)?).map_err(|e| e.to_string())?;
        for i in 0..200 {
            let t = 0.37 * i as f64;
            let mut total = 0.0;
            for k in 1..=n {
                let p = node_probability(&eig, k, t).map_err(|e| e.to_string())?;
                ensure((-1e-15..=1.0 + 1e-12).contains(&p), || {
                    format!("N={n} delta={delta} k={k} t={t}: P = {p} out of range")
                })?;
                total += p;
            }
            worst = worst.max((total - 1.0).abs());
            ensure((total - 1.0).abs() <= 1e-10, || {
                format!("N={n} delta={delta} t={t}: sum P_k = {total}")
            })?;
        }
    }
    Ok(format!("max |sum - 1| {worst:.2e}"))
}

fn full_space_oracle() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for (n, delta) in [(2, 1.0), (3, 1.0), (4, 2.272), (5, 2.0), (6, 2.373), (7, 1.5), (8, 2.557)] {
        let s = spec(n, delta)?;
        let oracle = FullSpaceOracle::new(&s).map_err(|e| e.to_string())?;
        let eig = eigensystem(&s).map_err(|e| e.to_string())?;
        let m0 = oracle.magnetization(0.0);
        for i in 0..50 {
            let t = 1.3 * i as f64;
            let a = oracle.amplitude(t).norm_sqr();
            let b = transfer_probability(&eig, t);
            worst = worst.max((a - b).abs());
            ensure((a - b).abs() <= 1e-8, || {
                format!("N={n} delta={delta} t={t}: full space {a} vs reduced {b}")
            })?;
        }
        for t in [3.0, 17.0, 40.0] {
            let m = oracle.magnetization(t);
            ensure((m - m0).abs() <= 1e-10, || {
                format!("N={n} delta={delta} t={t}: magnetization drift {:e}", m - m0)
            })?;
        }
    }
    Ok(format!("max deviation {worst:.2e}"))
}

fn odd_bound() -> Result<String, String> {
    for n in (3..=21).step_by(2) {
        let s: f64 = (1..=(n - 1) / 2)
            .map(|j| (2.0 * PI * j as f64 / (n + 1) as f64).cos())
            .sum();
        ensure(s.abs() <= 1e-12, || format!("N={n}: cosine sum {s:e}"))?;
        let r = bound_report(&spec(n, 1.0 + 1e-10)?).map_err(|e| e.to_string())?;
        ensure((r.f2_value - 2.0 / (n + 1) as f64).abs() <= 1e-8, || {
            format!("N={n}: f2 limit {}", r.f2_value)
        })?;
        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let delta = 1.0 + 0.05 * i as f64;
            let r = bound_report(&spec(n, delta)?).map_err(|e| e.to_string())?;
            ensure(r.r_values.iter().all(|v| (0.0..=1.0).contains(v)), || {
                format!("N={n} delta={delta}: r_j out of [0, 1]")
            })?;
            ensure(r.delta_max == r_value(delta, n, 1), || format!("N={n}: Delta != r_1"))?;
            ensure(r.f2_value <= r.f2_cap + 1e-12, || format!("N={n} delta={delta}: F2 above cap"))?;
            ensure(r.p_bound <= 1.0 + 1e-12 && r.p_bound <= prev, || {
                format!("N={n} delta={delta}: bound {} not monotone/capped", r.p_bound)
            })?;
            prev = r.p_bound;
        }
    }
    let mut margin = f64::INFINITY;
    for n in [5, 7, 9] {
        for delta in ODD_GRID_DELTAS {
            let s = spec(n, delta)?;
            let bound = bound_report(&s).map_err(|e| e.to_string())?.p_bound;
            let prop = Propagator::end_to_end(&eigensystem_odd(&s).map_err(|e| e.to_string())?);
            let max = (1..=100_000)
                .map(|i| prop.probability(i as f64 * 5e-3))
                .fold(0.0, f64::max);
            margin = margin.min(bound - max);
            ensure(max <= bound + 1e-9, || {
                format!("N={n} delta={delta}: sampled max {max} exceeds bound {bound}")
            })?;
        }
    }
    Ok(format!("smallest bound margin {margin:.3e}"))
}

fn ideal_family() -> Result<String, String> {
    let sols = ideal_solutions(2000).map_err(|e| e.to_string())?;
    ensure(!sols.is_empty(), || "no ideal solutions".into())?;
    for s in &sols {
        ensure(s.validated && s.probability >= 1.0 - IDEAL_TOL, || {
            format!("(a={}, b={}): P = {}", s.a, s.b, s.probability)
        })?;
        ensure(s.t_bar == PI * ((s.a * s.b) as f64).sqrt(), || {
            format!("(a={}, b={}): t_bar mismatch", s.a, s.b)
        })?;
        let (small, big) = n4_frequencies(s.delta_bar);
        ensure((small * big - 1.0).abs() <= 1e-12, || {
            format!("(a={}, b={}): frequency product {}", s.a, s.b, small * big)
        })?;
    }
    ensure(sols[0].t_bar == PI * 3f64.sqrt(), || "minimum t_bar is not pi sqrt(3)".into())?;
    let s4 = spec(4, 2.272)?;
    let eig = numeric(&s4)?;
    for i in 0..500 {
        let t = 0.07 * i as f64;
        let a = n4_probability(2.272, t);
        let b = transfer_probability(&eig, t);
        ensure((a - b).abs() <= 1e-10, || format!("closed form t={t}: {a} vs {b}"))?;
    }
    Ok(format!("{} solutions validated", sols.len()))
}

fn search_properties() -> Result<String, String> {
    for (n, delta) in OPTIMAL_RATIOS {
        let triad = first_peak(&spec(n, delta)?).map_err(|e| e.to_string())?;
        let rel = (triad.t_h - triad.lambda_min_estimate).abs() / triad.t_h;
        ensure(rel <= 0.10, || {
            format!("N={n} delta={delta}: t_h {} vs pi/lambda_min {}", triad.t_h, triad.lambda_min_estimate)
        })?;
        let eig = eigensystem(&spec(n, delta)?).map_err(|e| e.to_string())?;
        for k in 2..n {
            let prop = Propagator::new(&eig, k).map_err(|e| e.to_string())?;
            let horizon = 2.0 * triad.t_h;
            let max = (1..=40_000)
                .map(|i| prop.probability(horizon * i as f64 / 40_000.0))
                .fold(0.0, f64::max);
            ensure(max < 0.9, || {
                format!("N={n} delta={delta}: inner node {k} reaches {max}")
            })?;
        }
    }
    let curve_max = |delta: f64| -> Result<f64, String> {
        let prop = Propagator::end_to_end(&eigensystem_odd(&spec(5, delta)?).map_err(|e| e.to_string())?);
        Ok((1..=50_000)
            .map(|i| prop.probability(i as f64 * 1e-3))
            .fold(0.0, f64::max))
    };
    let (strong, uniform) = (curve_max(2.0)?, curve_max(1.0)?);
    ensure(strong < uniform, || {
        format!("N=5: max at delta=2 ({strong}) not below delta=1 ({uniform})")
    })?;

    let first = optimize_delta(4, 2.0, 3.0).map_err(|e| e.to_string())?;
    let second = optimize_delta(4, 2.0, 3.0).map_err(|e| e.to_string())?;
    ensure(first == second, || "optimize_delta not reproducible across runs".into())?;
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| e.to_string())?;
        let single = pool
            .install(|| optimize_delta(4, 2.0, 3.0))
            .map_err(|e| e.to_string())?;
        ensure(first == single, || "optimize_delta depends on worker count".into())?;
    }
    Ok(format!(
        "optimum N=4 delta_h={:.4} p_h={:.6}",
        first.delta_h, first.p_h
    ))
}

pub const CHECKS: [(&str, Check); 10] = [
    ("spectral: analytic vs numeric eigen-systems", spectral_agreement),
    ("spectral: even root counts and residuals", even_roots),
    ("spectral: slow mode shrinks with N", slow_mode_shrinks),
    ("dynamics: reduced forms match spectral sum", form_equivalence),
    ("dynamics: unitarity", unitarity),
    ("dynamics: full-space oracle", full_space_oracle),
    ("bounds: odd-chain cap", odd_bound),
    ("ideal-n4: perfect-transfer family", ideal_family),
    ("search: first peak, inner nodes, odd decay, determinism", search_properties),
    ("chain: coupling matrix layout", chain_layout),
];

fn chain_layout() -> Result<String, String> {
    for n in 2..=20 {
        let s = ChainSpec::with_coupling(n, 1.0, 2.5).map_err(|e| e.to_string())?;
        let m = build_coupling_matrix(&s);
        let d2 = m.off_diagonal().iter().filter(|&&x| x == 2.5).count();
        ensure(d2 == (n - 1) / 2, || format!("N={n}: {d2} D2 bonds"))?;
        let last = *m.off_diagonal().last().unwrap();
        let expected = if n % 2 == 0 { 1.0 } else { 2.5 };
        ensure(last == expected, || format!("N={n}: last bond {last}"))?;
    }
    Ok("bond layout ok".into())
}

/// Runs every check in order, stopping at the first failure. `report` sees
/// each outcome as soon as it is known.
pub fn run_verification(mut report: impl FnMut(&CheckOutcome)) -> Vec<CheckOutcome> {
    let mut outcomes = Vec::new();
    for (name, check) in CHECKS {
        let start = Instant::now();
        let result = check();
        let outcome = CheckOutcome {
            name,
            passed: result.is_ok(),
            detail: result.unwrap_or_else(|e| e),
            seconds: start.elapsed().as_secs_f64(),
        };
        report(&outcome);
        let failed = !outcome.passed;
        outcomes.push(outcome);
        if failed {
            break;
        }
    }
    outcomes
}
