//! Transfer probabilities in the single-excitation sector.
//!
//! The canonical path is the complex spectral sum
//! `A_k(t) = sum_j u_kj u_1j exp(-i t lambda_j / 2)`; the real reduced
//! forms for even and odd chains are kept as cross-checks. Node indices in
//! this module are 1-based, matching the physical site labels.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::par;
use crate::spectral::{zero_mode_weight_sq, EigenSystem, EvenRootSet};

/// Spectral weights `u_kj u_1j` and half-frequencies `lambda_j / 2` for one
/// target node, ready for repeated evaluation in time.
#[derive(Debug, Clone)]
pub struct Propagator {
    weights: Vec<f64>,
    half_freqs: Vec<f64>,
}

impl Propagator {
    pub fn new(eig: &EigenSystem, node: usize) -> Result<Self> {
        check_node(node, eig.size())?;
        let (weights, half_freqs) = (0..eig.size())
            .map(|j| {
                (
                    eig.component(node - 1, j) * eig.component(0, j),
                    0.5 * eig.eigenvalues()[j],
                )
            })
            .unzip();
        Ok(Self {
            weights,
            half_freqs,
        })
    }

    /// End-to-end transfer, source 1 to target N.
    pub fn end_to_end(eig: &EigenSystem) -> Self {
        Self::new(eig, eig.size()).expect("last node is always in range")
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(&self.half_freqs)
            .map(|(&w, &f)| Complex64::from_polar(w, -t * f))
            .sum()
    }

    pub fn probability(&self, t: f64) -> f64 {
        self.amplitude(t).norm_sqr()
    }
}

fn check_node(node: usize, n_sites: usize) -> Result<()> {
    if node == 0 || node > n_sites {
        Err(Error::NodeOutOfRange { node, n_sites })
    } else {
        Ok(())
    }
}

pub fn node_amplitude(eig: &EigenSystem, node: usize, t: f64) -> Result<Complex64> {
    Ok(Propagator::new(eig, node)?.amplitude(t))
}

pub fn node_probability(eig: &EigenSystem, node: usize, t: f64) -> Result<f64> {
    Ok(Propagator::new(eig, node)?.probability(t))
}

/// `P(t) = |<N| exp(-iHt) |1>|^2`.
pub fn transfer_probability(eig: &EigenSystem, t: f64) -> f64 {
    Propagator::end_to_end(eig).probability(t)
}

/// Reduced even-chain sine series built directly from the secular roots.
pub fn transfer_probability_even_form(spec: &ChainSpec, roots: &EvenRootSet, t: f64) -> Result<f64> {
    spec.require_zero_field()?;
    if !spec.is_even() || spec.delta() <= spec.even_regime_threshold() {
        return Err(Error::Regime(format!(
            "even form needs even N and delta > (N+2)/N (N = {}, delta = {})",
            spec.n_sites(),
            spec.delta()
        )));
    }
    let n = spec.n_sites();
    let nf = n as f64;
    let (d1, d2) = (spec.d1(), spec.d2());
    let mut sum = 0.0;
    let mut sign = 1.0;
    for &x in &roots.x_roots {
        let a_sq = 2.0 / (nf + 1.0 - ((nf + 1.0) * x).sin() / x.sin());
        let lambda = (d1 * d1 + d2 * d2 + 2.0 * d1 * d2 * x.cos()).sqrt();
        sum += sign * a_sq * (nf * x / 2.0).sin().powi(2) * (t * lambda / 2.0).sin();
        sign = -sign;
    }
    let y = roots.y_root;
    let a_sq = 2.0 / (((nf + 1.0) * y).sinh() / y.sinh() - nf - 1.0);
    let lambda = roots.hyperbolic_lambda(d1, spec.delta());
    let hyper_sign = if (n / 2) % 2 == 1 { 1.0 } else { -1.0 };
    sum += hyper_sign * a_sq * (nf * y / 2.0).sinh().powi(2) * (t * lambda / 2.0).sin();
    Ok(4.0 * sum * sum)
}

/// Reduced odd-chain cosine series with the constant zero-mode term.
pub fn transfer_probability_odd_form(spec: &ChainSpec, t: f64) -> Result<f64> {
    spec.require_zero_field()?;
    if spec.is_even() {
        return Err(Error::Domain(format!(
            "odd form needs odd N, got {}",
            spec.n_sites()
        )));
    }
    let n = spec.n_sites();
    let np1 = (n + 1) as f64;
    let delta = spec.delta();
    let d1 = spec.d1();
    let a_sq = 2.0 / np1;
    let mut sum = 0.0;
    for j in 1..=(n - 1) / 2 {
        let jf = j as f64;
        let spread = 1.0 + 2.0 * delta * (2.0 * PI * jf / np1).cos() + delta * delta;
        let lambda = d1 * spread.sqrt();
        sum += 2.0 * a_sq * d1 * d1 * delta / (lambda * lambda)
            * (2.0 * PI * jf / np1).sin()
            * (PI * jf * (n - 1) as f64 / np1).sin()
            * (lambda * t / 2.0).cos();
    }
    sum += zero_mode_weight_sq(delta, n) * (-delta).powi(((n - 1) / 2) as i32);
    Ok(sum * sum)
}

/// Uniformly sampled probability curve for one target node.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferCurve {
    pub times: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub target_node: usize,
}

impl TransferCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sample with the largest probability; earliest wins ties.
    pub fn peak(&self) -> Option<(f64, f64)> {
        par::argmax_first(&self.probabilities).map(|i| (self.times[i], self.probabilities[i]))
    }
}

/// Samples `n_samples` points uniformly on `[0, t_max]`.
pub fn sample_curve(eig: &EigenSystem, node: usize, t_max: f64, n_samples: usize) -> Result<TransferCurve> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max = {t_max} must be positive")));
    }
    if n_samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_samples = {n_samples}, need at least 2"
        )));
    }
    let prop = Propagator::new(eig, node)?;
    let step = t_max / (n_samples - 1) as f64;
    let times: Vec<f64> = (0..n_samples)
        .map(|i| if i + 1 == n_samples { t_max } else { i as f64 * step })
        .collect();
    let probabilities = par::map_slice(&times, |&t| prop.probability(t));
    Ok(TransferCurve {
        times,
        probabilities,
        target_node: node,
    })
}
