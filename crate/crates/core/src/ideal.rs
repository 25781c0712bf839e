//! Four-site chain: closed-form transfer probability and the family of
//! parameters giving perfect transfer.
//!
//! The two positive eigenvalues satisfy `lambda_big * lambda_small = D1^2`
//! and `lambda_big - lambda_small = D2`. Perfect transfer needs
//! `lambda t / 2` to land on odd multiples of `pi / 2` with opposite sine
//! signs, i.e. multiples `a = 3 (mod 4)` and `b = 1 (mod 4)`. Solving gives
//! `delta = |a - b| / sqrt(ab)` and `D1 t = pi sqrt(ab)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::par;

/// Acceptance threshold for an emitted solution.
pub const IDEAL_TOL: f64 = 1e-9;

/// The two positive eigenvalues `(small, big)` of the four-site chain in units of `D1`.
pub fn n4_frequencies(delta: f64) -> (f64, f64) {
    let root = (delta * delta + 4.0).sqrt();
    (2.0 / (delta + root), 0.5 * (delta + root))
}

/// Closed-form end-to-end probability for `N = 4`, time in units of `1 / D1`.
pub fn n4_probability(delta: f64, t: f64) -> f64 {
    let c = delta / (delta * delta + 4.0).sqrt();
    let (small, big) = n4_frequencies(delta);
    let amp = (1.0 + c) * (t * small / 2.0).sin() - (1.0 - c) * (t * big / 2.0).sin();
    0.25 * amp * amp
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealSolution {
    /// Half-period multiple with `a = 3 (mod 4)`.
    pub a: u64,
    /// Half-period multiple with `b = 1 (mod 4)`.
    pub b: u64,
    pub delta_bar: f64,
    pub t_bar: f64,
    pub probability: f64,
    pub validated: bool,
}

fn candidate(a: u64, b: u64) -> IdealSolution {
    let ab = (a * b) as f64;
    let delta_bar = a.abs_diff(b) as f64 / ab.sqrt();
    let t_bar = PI * ab.sqrt();
    let probability = n4_probability(delta_bar, t_bar);
    IdealSolution {
        a,
        b,
        delta_bar,
        t_bar,
        probability,
        validated: probability >= 1.0 - IDEAL_TOL,
    }
}

/// All validated solutions with `ab <= max_product`, sorted by `t_bar`
/// (then by `delta_bar`).
pub fn ideal_solutions(max_product: u64) -> Result<Vec<IdealSolution>> {
    if max_product < 3 {
        return Err(Error::InvalidArgument(format!(
            "max_product = {max_product}, need at least 3"
        )));
    }
    let pairs: Vec<(u64, u64)> = (0..)
        .map(|k| 3 + 4 * k)
        .take_while(|&a| a <= max_product)
        .flat_map(|a| {
            (0..)
                .map(|n| 1 + 4 * n)
                .take_while(move |&b| a * b <= max_product)
                .map(move |b| (a, b))
        })
        .collect();
    let candidates = par::map_slice(&pairs, |&(a, b)| candidate(a, b));

    let mut solutions: Vec<IdealSolution> = Vec::with_capacity(candidates.len());
    for c in candidates {
        if !c.validated {
            log::warn!(
                "rejected ideal candidate (a={}, b={}): P = {:.15} at delta = {}, t = {}",
                c.a,
                c.b,
                c.probability,
                c.delta_bar,
                c.t_bar
            );
            continue;
        }
        solutions.push(c);
    }
    solutions.sort_by(|x, y| {
        x.t_bar
            .total_cmp(&y.t_bar)
            .then(x.delta_bar.total_cmp(&y.delta_bar))
    });
    solutions.dedup_by(|x, y| {
        (x.t_bar - y.t_bar).abs() <= 1e-12 && (x.delta_bar - y.delta_bar).abs() <= 1e-12
    });
    Ok(solutions)
}
