//! Analytic cap on the end-to-end probability of odd chains.

use std::f64::consts::PI;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::par;
use crate::scalar::golden_max;
use crate::spectral::zero_mode_weight_sq;

/// Horizon for the equality search, in units of `1 / D1`.
pub const EQUALITY_HORIZON: f64 = 1e4;
/// `|cos|` must reach `1 - EQUALITY_TOL` for every mode at once.
pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n_sites: usize,
    pub delta: f64,
    /// `r_j(delta)` for `j = 1..(N-1)/2`.
    pub r_values: Vec<f64>,
    /// `Delta(delta) = max_j r_j = r_1`.
    pub delta_max: f64,
    pub f1_cap: f64,
    pub f2_value: f64,
    pub f2_cap: f64,
    pub p_bound: f64,
}

fn check_odd(spec: &ChainSpec) -> Result<()> {
    if spec.is_even() {
        return Err(Error::Domain(format!(
            "bound defined for odd N only, got {}",
            spec.n_sites()
        )));
    }
    spec.require_zero_field()
}

pub fn r_value(delta: f64, n_sites: usize, j: usize) -> f64 {
    let c = (2.0 * PI * j as f64 / (n_sites + 1) as f64).cos();
    (2.0 + 2.0 * c) / (delta + 1.0 / delta + 2.0 * c)
}

pub fn bound_report(spec: &ChainSpec) -> Result<BoundReport> {
    check_odd(spec)?;
    let delta = spec.delta();
    if delta < 1.0 {
        return Err(Error::Convention {
            delta,
            inverse: 1.0 / delta,
        });
    }
    let n = spec.n_sites();
    let np1 = (n + 1) as f64;
    let r_values: Vec<f64> = (1..=(n - 1) / 2).map(|j| r_value(delta, n, j)).collect();
    let delta_max = r_values[0];
    let f1_cap = delta_max * (n - 1) as f64 / np1;
    let f2_value = delta.powi(((n - 1) / 2) as i32) * zero_mode_weight_sq(delta, n);
    let f2_cap = 2.0 / np1;
    let p_bound = ((delta_max * (n - 1) as f64 + 2.0) / np1).powi(2);
    Ok(BoundReport {
        n_sites: n,
        delta,
        r_values,
        delta_max,
        f1_cap,
        f2_value,
        f2_cap,
        p_bound,
    })
}

/// Largest `min_j |cos(lambda_j t / 2)|` found for `0 < t <= horizon` and
/// the time where it occurs.
///
/// Candidates are the extrema `t = 2 pi m / lambda_max` of the fastest
/// mode, each refined by golden-section search within a quarter period.
pub fn best_simultaneous_extremum(lambdas: &[f64], horizon: f64) -> (f64, f64) {
    let lambda_max = lambdas.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    if lambda_max == 0.0 || lambdas.is_empty() {
        return (horizon, 1.0);
    }
    let score = |t: f64| {
        lambdas
            .iter()
            .map(|l| (l * t / 2.0).cos().abs())
            .fold(1.0, f64::min)
    };
    let period = 2.0 * PI / lambda_max;
    let count = (horizon / period).floor() as usize;
    let refined = par::map_range(count, |i| {
        let centre = period * (i + 1) as f64;
        let half = 0.25 * period;
        let (t, s) = golden_max(score, centre - half, (centre + half).min(horizon), 1e-13);
        (s, t)
    });
    let (score, t) = refined
        .into_iter()
        .fold((0.0, 0.0), |best, (s, t)| if s > best.0 { (s, t) } else { best });
    (t, score)
}

/// Whether the equality conditions of the bound (`delta = 1` and every
/// `|cos(lambda_j t0 / 2)| = 1` at one `t0 > 0`) are met within
/// [`EQUALITY_HORIZON`]. Any `delta != 1` already fails.
pub fn equality_feasible(spec: &ChainSpec) -> Result<bool> {
    check_odd(spec)?;
    if spec.delta() != 1.0 {
        return Ok(false);
    }
    let n = spec.n_sites();
    let d1 = spec.d1();
    let lambdas: Vec<f64> = (1..=(n - 1) / 2)
        .map(|j| d1 * (2.0 + 2.0 * (2.0 * PI * j as f64 / (n + 1) as f64).cos()).sqrt())
        .collect();
    let (_, score) = best_simultaneous_extremum(&lambdas, EQUALITY_HORIZON / d1);
    Ok(score >= 1.0 - EQUALITY_TOL)
}
