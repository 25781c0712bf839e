//! High-probability transfer searches over time and the coupling ratio.
//!
//! The first peak is the earliest local maximum of `P(t)` reaching
//! [`HIGH_PROBABILITY`] inside `(0, 1.3 pi / lambda_min]`; if no maximum
//! reaches it, the window's global maximum is used instead. `pi / lambda_min`
//! is where the slowest mode completes its first half-swing, and all
//! reported peaks sit near it.

use std::f64::consts::PI;

use crate::chain::ChainSpec;
use crate::dynamics::{Propagator, TransferCurve};
use crate::error::{Error, Result};
use crate::par;
use crate::scalar::golden_max;
use crate::spectral::{eigensystem, EigenSystem};

pub const HIGH_PROBABILITY: f64 = 0.9;
pub const WINDOW_FACTOR: f64 = 1.3;
pub const MAX_TIME_STEP: f64 = 0.01;
pub const PEAK_TIME_TOL: f64 = 1e-8;
pub const DELTA_STEP: f64 = 0.002;
pub const DELTA_TOL: f64 = 1e-4;
pub const FIXED_TIME_DELTA_STEP: f64 = 0.001;
pub const FIXED_TIME_DELTA_TOL: f64 = 1e-7;

/// Grid samples within this margin below the threshold are still refined,
/// since the true peak can sit between samples.
const CANDIDATE_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferTriad {
    pub delta_h: f64,
    pub t_h: f64,
    pub p_h: f64,
    /// `pi / lambda_min`, the slow-mode estimate of `t_h`.
    pub lambda_min_estimate: f64,
}

fn refine_peak(prop: &Propagator, lo: f64, hi: f64) -> (f64, f64) {
    golden_max(|t| prop.probability(t), lo, hi, PEAK_TIME_TOL)
}

/// First peak of the end-to-end probability for an already computed spectrum.
pub fn first_peak_with(spec: &ChainSpec, eig: &EigenSystem) -> Result<TransferTriad> {
    let lambda_min = eig.lambda_min().unwrap_or(0.0);
    if lambda_min < 1e-12 * spec.d1() {
        return Err(Error::Horizon { lambda_min });
    }
    let estimate = PI / lambda_min;
    let horizon = WINDOW_FACTOR * estimate;
    let step = MAX_TIME_STEP.min(PI / (50.0 * eig.lambda_max_abs()));
    let count = (horizon / step).ceil() as usize;
    let prop = Propagator::end_to_end(eig);
    let times: Vec<f64> = (1..=count)
        .map(|i| (i as f64 * step).min(horizon))
        .collect();
    let probs = par::map_slice(&times, |&t| prop.probability(t));

    let bracket = |i: usize| {
        let lo = if i == 0 { 0.0 } else { times[i - 1] };
        let hi = times[(i + 1).min(count - 1)];
        (lo, hi)
    };

    for i in 0..count {
        let p = probs[i];
        if p < HIGH_PROBABILITY - CANDIDATE_MARGIN {
            continue;
        }
        let rising = i == 0 || p >= probs[i - 1];
        let falling = i + 1 == count || p >= probs[i + 1];
        if rising && falling {
            let (lo, hi) = bracket(i);
            let (t, p) = refine_peak(&prop, lo, hi);
            if p >= HIGH_PROBABILITY {
                return Ok(TransferTriad {
                    delta_h: spec.delta(),
                    t_h: t,
                    p_h: p,
                    lambda_min_estimate: estimate,
                });
            }
        }
    }

    let i = par::argmax_first(&probs).ok_or(Error::Horizon { lambda_min })?;
    let (lo, hi) = bracket(i);
    let (t, p) = refine_peak(&prop, lo, hi);
    Ok(TransferTriad {
        delta_h: spec.delta(),
        t_h: t,
        p_h: p,
        lambda_min_estimate: estimate,
    })
}

pub fn first_peak(spec: &ChainSpec) -> Result<TransferTriad> {
    first_peak_with(spec, &eigensystem(spec)?)
}

fn delta_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|i| lo + i as f64 * step).collect();
    if hi - grid[count] > 1e-12 {
        grid.push(hi);
    }
    grid
}

fn check_delta_range(n_sites: usize, lo: f64, hi: f64, even_regime: bool) -> Result<()> {
    if n_sites < 2 {
        return Err(Error::InvalidSpec(format!("n_sites = {n_sites}, need at least 2")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "empty delta range [{lo}, {hi}]"
        )));
    }
    if even_regime {
        if n_sites % 2 != 0 {
            return Err(Error::Domain(format!(
                "delta optimization targets even N, got {n_sites}"
            )));
        }
        let threshold = (n_sites as f64 + 2.0) / n_sites as f64;
        if lo <= threshold {
            return Err(Error::InvalidArgument(format!(
                "delta_lo = {lo} must exceed (N+2)/N = {threshold}"
            )));
        }
    }
    Ok(())
}

/// Ratio maximizing the first-peak probability on `[delta_lo, delta_hi]`.
pub fn optimize_delta(n_sites: usize, delta_lo: f64, delta_hi: f64) -> Result<TransferTriad> {
    check_delta_range(n_sites, delta_lo, delta_hi, true)?;
    let peak_at = |delta: f64| ChainSpec::new(n_sites, delta).and_then(|s| first_peak(&s));

    let grid = delta_grid(delta_lo, delta_hi, DELTA_STEP);
    let results = par::map_slice(&grid, |&d| peak_at(d));
    let scores: Vec<f64> = results
        .iter()
        .map(|r| r.as_ref().map_or(f64::NEG_INFINITY, |t| t.p_h))
        .collect();
    let best = match par::argmax_first(&scores) {
        Some(i) if scores[i].is_finite() => i,
        _ => {
            return Err(results
                .into_iter()
                .find_map(Result::err)
                .unwrap_or_else(|| Error::InvalidArgument("empty delta grid".into())))
        }
    };
    let grid_best = results[best].clone()?;

    let lo = (grid[best] - DELTA_STEP).max(delta_lo);
    let hi = (grid[best] + DELTA_STEP).min(delta_hi);
    let (delta, _) = golden_max(
        |d| peak_at(d).map_or(f64::NEG_INFINITY, |t| t.p_h),
        lo,
        hi,
        DELTA_TOL,
    );
    match peak_at(delta) {
        Ok(refined) if refined.p_h > grid_best.p_h => Ok(refined),
        _ => Ok(grid_best),
    }
}

/// Ratio maximizing `P(delta, t_fixed)` on `[delta_lo, delta_hi]`.
pub fn fixed_time_optimize(
    n_sites: usize,
    t_fixed: f64,
    delta_lo: f64,
    delta_hi: f64,
) -> Result<TransferTriad> {
    check_delta_range(n_sites, delta_lo, delta_hi, false)?;
    if !(t_fixed.is_finite() && t_fixed > 0.0) {
        return Err(Error::InvalidArgument(format!("t_fixed = {t_fixed} must be positive")));
    }
    let evaluate = |delta: f64| -> Result<(f64, f64)> {
        let spec = ChainSpec::new(n_sites, delta)?;
        let eig = eigensystem(&spec)?;
        let estimate = eig.lambda_min().map_or(f64::INFINITY, |l| PI / l);
        Ok((Propagator::end_to_end(&eig).probability(t_fixed), estimate))
    };

    let grid = delta_grid(delta_lo, delta_hi, FIXED_TIME_DELTA_STEP);
    let results = par::map_slice(&grid, |&d| evaluate(d));
    let mut scores = Vec::with_capacity(results.len());
    for r in results {
        scores.push(r?.0);
    }
    let best = par::argmax_first(&scores)
        .ok_or_else(|| Error::InvalidArgument("empty delta grid".into()))?;

    let lo = (grid[best] - FIXED_TIME_DELTA_STEP).max(delta_lo);
    let hi = (grid[best] + FIXED_TIME_DELTA_STEP).min(delta_hi);
    let (delta, p) = golden_max(
        |d| evaluate(d).map_or(f64::NEG_INFINITY, |r| r.0),
        lo,
        hi,
        FIXED_TIME_DELTA_TOL,
    );
    let (delta, p) = if p > scores[best] {
        (delta, p)
    } else {
        (grid[best], scores[best])
    };
    Ok(TransferTriad {
        delta_h: delta,
        t_h: t_fixed,
        p_h: p,
        lambda_min_estimate: evaluate(delta)?.1,
    })
}

/// One row of the fixed-ratio sweep over chain lengths; a failed row keeps
/// its error so the rest of the sweep is still reported.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n_sites: usize,
    pub delta: f64,
    pub peak: Result<TransferTriad>,
}

impl SweepRow {
    pub fn t_h1(&self) -> Option<f64> {
        self.peak.as_ref().ok().map(|p| p.t_h)
    }

    pub fn p_h1(&self) -> Option<f64> {
        self.peak.as_ref().ok().map(|p| p.p_h)
    }
}

pub fn table1_sweep(delta: f64, n_list: &[usize]) -> Result<Vec<SweepRow>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    for &n in &ns {
        let spec = ChainSpec::new(n, delta)?;
        if !spec.is_even() {
            return Err(Error::Domain(format!("sweep expects even N, got {n}")));
        }
        if delta <= spec.even_regime_threshold() {
            return Err(Error::Regime(format!(
                "delta = {delta} must exceed (N+2)/N = {} for N = {n}",
                spec.even_regime_threshold()
            )));
        }
    }
    Ok(par::map_slice(&ns, |&n| SweepRow {
        n_sites: n,
        delta,
        peak: ChainSpec::new(n, delta).and_then(|s| first_peak(&s)),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwellWindow {
    pub start: f64,
    pub end: f64,
}

impl DwellWindow {
    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }
}

/// Maximal run of samples around the curve's global maximum with
/// `P >= threshold`; `None` if the peak itself is below the threshold.
pub fn dwell_window(curve: &TransferCurve, threshold: f64) -> Result<Option<DwellWindow>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold = {threshold} must lie in (0, 1]"
        )));
    }
    let Some(peak) = par::argmax_first(&curve.probabilities) else {
        return Ok(None);
    };
    let p = &curve.probabilities;
    if p[peak] < threshold {
        return Ok(None);
    }
    let mut lo = peak;
    while lo > 0 && p[lo - 1] >= threshold {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < p.len() && p[hi + 1] >= threshold {
        hi += 1;
    }
    Ok(Some(DwellWindow {
        start: curve.times[lo],
        end: curve.times[hi],
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::sample_curve;
    use crate::ideal::n4_probability;

    #[test]
    fn n4_first_peak() {
        let t = first_peak(&ChainSpec::new(4, 2.272).unwrap()).unwrap();
        assert!((t.t_h - 8.303).abs() < 0.01);
        assert!((t.p_h - 0.999).abs() <= 1e-3);
        assert!((t.lambda_min_estimate - 8.3235).abs() < 1e-3);
        assert_eq!(t.delta_h, 2.272);
    }

    #[test]
    fn grid_helper_includes_endpoint() {
        let g = delta_grid(2.0, 2.005, 0.002);
        assert_eq!(g.len(), 4);
        assert_eq!(*g.last().unwrap(), 2.005);
        assert_eq!(delta_grid(2.0, 3.0, 0.002).len(), 501);
    }

    #[test]
    fn optimizer_range_errors() {
        assert!(optimize_delta(4, 3.0, 2.0).is_err());
        assert!(optimize_delta(4, 1.2, 2.0).is_err());
        assert!(matches!(optimize_delta(5, 2.0, 3.0), Err(Error::Domain(_))));
        assert!(fixed_time_optimize(4, 0.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn vanishing_time() {
        for n in [3, 4, 7, 8] {
            let t = fixed_time_optimize(n, 1e-6, 2.0, 3.0).unwrap();
            assert!(t.p_h <= 1e-6);
        }
    }

    #[test]
    fn sweep_rejects_bad_inputs() {
        assert!(matches!(table1_sweep(2.38, &[4, 5]), Err(Error::Domain(_))));
        assert!(matches!(table1_sweep(1.4, &[4, 6]), Err(Error::Regime(_))));
    }

    #[test]
    fn dwell_windows() {
        let eig = eigensystem(&ChainSpec::new(4, 2.272).unwrap()).unwrap();
        let curve = sample_curve(&eig, 4, 30.0, 3000).unwrap();
        let w = dwell_window(&curve, 0.8).unwrap().unwrap();
        assert!(w.contains(8.303));
        assert!(w.width() > 0.0);
        assert!(dwell_window(&curve, 1.0).unwrap().is_none());
        assert!(dwell_window(&curve, 0.0).is_err());

        let delta = 2.0 / 3f64.sqrt();
        let t_bar = PI * 3f64.sqrt();
        let times: Vec<f64> = (0..2001).map(|i| t_bar - 0.5 + i as f64 * 5e-4).collect();
        let probabilities = times.iter().map(|&t| n4_probability(delta, t)).collect();
        let ideal = TransferCurve {
            times,
            probabilities,
            target_node: 4,
        };
        let w = dwell_window(&ideal, 0.999).unwrap().unwrap();
        assert!(w.contains(t_bar));
    }
}
