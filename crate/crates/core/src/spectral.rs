//! Eigen-systems of the coupling matrix.
//!
//! Three routes produce the same [`EigenSystem`]: closed forms for even
//! chains (trigonometric roots `x_nu` plus one hyperbolic root `y`), closed
//! forms for odd chains, and the numeric tridiagonal solver. The numeric
//! route is the oracle for the other two and the fallback outside their
//! regimes.

use std::f64::consts::{PI, SQRT_2};

use crate::chain::{build_coupling_matrix, ChainSpec, CouplingMatrix};
use crate::error::{Error, Result};
use crate::scalar::bisect;
use crate::tridiag::ql_implicit;

/// Bisection target for the transcendental roots.
pub const ROOT_TOL: f64 = 1e-13;

/// Above this length the closed-form even normalization involves
/// `sinh((N+1) y)` large enough that the numeric route is preferred.
pub const ANALYTIC_EVEN_MAX_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    AnalyticEven,
    AnalyticOdd,
    Numeric,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::AnalyticEven => "analytic-even",
            Provenance::AnalyticOdd => "analytic-odd",
            Provenance::Numeric => "numeric",
        }
    }
}

/// Eigenvalues sorted descending with matching eigenvector columns.
///
/// Indices into eigenvalues and columns are 0-based; site indices into a
/// column are 0-based as well (`component(0, nu)` is the first spin).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    vectors: Vec<f64>,
    provenance: Provenance,
}

impl EigenSystem {
    fn from_parts(eigenvalues: Vec<f64>, vectors: Vec<f64>, provenance: Provenance) -> Self {
        debug_assert_eq!(vectors.len(), eigenvalues.len() * eigenvalues.len());
        Self {
            eigenvalues,
            vectors,
            provenance,
        }
    }

    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn column(&self, nu: usize) -> &[f64] {
        let n = self.size();
        &self.vectors[nu * n..(nu + 1) * n]
    }

    pub fn component(&self, site: usize, nu: usize) -> f64 {
        self.vectors[nu * self.size() + site]
    }

    /// Smallest strictly positive eigenvalue.
    pub fn lambda_min(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|&l| l > 0.0)
            .reduce(f64::min)
    }

    pub fn lambda_max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }

    /// `max |<u_a, u_b> - delta_ab|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self
                    .column(a)
                    .iter()
                    .zip(self.column(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max_nu ||D u_nu - lambda_nu u_nu||_inf`.
    pub fn residual(&self, matrix: &CouplingMatrix) -> f64 {
        (0..self.size())
            .map(|nu| {
                let du = matrix.apply(self.column(nu));
                du.iter()
                    .zip(self.column(nu))
                    .map(|(a, u)| (a - self.eigenvalues[nu] * u).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Largest eigenvalue and eigenvector deviation from `other`, with each
    /// column compared up to a global sign.
    pub fn deviation_from(&self, other: &EigenSystem) -> (f64, f64) {
        assert_eq!(self.size(), other.size(), "eigen-system size mismatch");
        let mut value_dev: f64 = 0.0;
        let mut vector_dev: f64 = 0.0;
        for nu in 0..self.size() {
            value_dev = value_dev.max((self.eigenvalues[nu] - other.eigenvalues[nu]).abs());
            let a = self.column(nu);
            let b = other.column(nu);
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let sign = if dot < 0.0 { -1.0 } else { 1.0 };
            let dev = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - sign * y).abs())
                .fold(0.0, f64::max);
            vector_dev = vector_dev.max(dev);
        }
        (value_dev, vector_dev)
    }
}

/// Roots of the even-chain secular equations.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenRootSet {
    /// `N/2 - 1` roots of `delta sin(N x / 2) + sin((N/2 + 1) x) = 0` in `(0, pi)`, increasing.
    pub x_roots: Vec<f64>,
    /// Positive root of `delta sinh(N y / 2) - sinh((N/2 + 1) y) = 0`.
    pub y_root: f64,
    /// `ln(delta) - y_root`, resolved to full relative precision. The slow
    /// eigenvalue is proportional to it, so it is solved for directly.
    pub y_gap: f64,
}

impl EvenRootSet {
    /// Magnitude of the hyperbolic eigenvalue pair, from
    /// `lambda^2 = (D2 - D1 e^y)(D2 - D1 e^-y)`.
    pub fn hyperbolic_lambda(&self, d1: f64, delta: f64) -> f64 {
        let near = -delta * (-self.y_gap).exp_m1();
        let far = delta - (-self.y_root).exp();
        d1 * (near * far).max(0.0).sqrt()
    }
}

/// The y-equation in terms of the gap `eps = ln(delta) - y`, divided by
/// `delta e^(N y / 2) / 2`. Same sign as [`y_residual_relative`].
fn y_gap_residual(delta: f64, half: usize, eps: f64) -> f64 {
    let y = delta.ln() - eps;
    -(-eps).exp_m1() - (-2.0 * half as f64 * y).exp() * (1.0 - (-y).exp() / delta)
}

/// Residual allowed at an x-root: the bisection tolerance times a bound on
/// the slope of [`x_residual`].
pub(crate) fn x_residual_tol(delta: f64, half: usize) -> f64 {
    ROOT_TOL * (delta * half as f64 + (half + 1) as f64)
}

pub(crate) fn x_residual(delta: f64, half: usize, x: f64) -> f64 {
    delta * (half as f64 * x).sin() + ((half + 1) as f64 * x).sin()
}

/// `sinh(a) / cosh(b)` for `0 <= a <= b` without overflow.
fn sinh_over_cosh(a: f64, b: f64) -> f64 {
    if b < 30.0 {
        a.sinh() / b.cosh()
    } else {
        ((a - b).exp() - (-a - b).exp()) / (1.0 + (-2.0 * b).exp())
    }
}

/// The y-equation divided by `cosh((N/2 + 1) y)`.
pub(crate) fn y_residual_relative(delta: f64, half: usize, y: f64) -> f64 {
    let b = (half + 1) as f64 * y;
    delta * sinh_over_cosh(half as f64 * y, b) - sinh_over_cosh(b, b)
}

fn check_even_regime(spec: &ChainSpec) -> Result<()> {
    spec.require_zero_field()?;
    if !spec.is_even() {
        return Err(Error::Domain(format!(
            "even-chain formulas need even N, got {}",
            spec.n_sites()
        )));
    }
    let threshold = spec.even_regime_threshold();
    if spec.delta() <= threshold {
        return Err(Error::Regime(format!(
            "delta = {} must exceed (N+2)/N = {threshold}",
            spec.delta()
        )));
    }
    Ok(())
}

pub fn solve_even_roots(spec: &ChainSpec) -> Result<EvenRootSet> {
    check_even_regime(spec)?;
    let n = spec.n_sites();
    let half = n / 2;
    let delta = spec.delta();

    let samples = 10 * n;
    let grid: Vec<f64> = (1..samples).map(|i| PI * i as f64 / samples as f64).collect();
    let f = |x: f64| x_residual(delta, half, x);
    let mut x_roots = Vec::with_capacity(half - 1);
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            x_roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            if let Some(r) = bisect(f, a, b, ROOT_TOL) {
                x_roots.push(r);
            }
        }
    }
    if let Some(&last) = grid.last() {
        if f(last) == 0.0 {
            x_roots.push(last);
        }
    }
    if x_roots.len() != half - 1 {
        return Err(Error::Consistency(format!(
            "found {} x-roots for N = {n}, delta = {delta}; expected {}",
            x_roots.len(),
            half - 1
        )));
    }

    // In the regime the residual is positive as y -> 0+ and negative at
    // y = ln(delta) (gap 0), so the root has a gap in (0, ln delta).
    let ln_delta = delta.ln();
    let phi = |eps: f64| y_gap_residual(delta, half, eps);
    let mut y_lo = 0.5 * ln_delta;
    let mut contractions = 0;
    while phi(ln_delta - y_lo) <= 0.0 {
        y_lo *= 0.5;
        contractions += 1;
        if contractions > 200 {
            return Err(Error::Consistency("y-equation: no positive bracket end".into()));
        }
    }
    let y_gap = bisect(phi, 0.0, ln_delta - y_lo, 0.0)
        .ok_or_else(|| Error::Consistency("y-equation bracket lost its sign change".into()))?;
    let y_root = ln_delta - y_gap;

    Ok(EvenRootSet { x_roots, y_root, y_gap })
}

pub fn eigensystem_even(spec: &ChainSpec) -> Result<EigenSystem> {
    let roots = solve_even_roots(spec)?;
    Ok(eigensystem_even_from_roots(spec, &roots))
}

/// Sign `(-1)^p`.
fn parity_sign(p: usize) -> f64 {
    if p % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn eigensystem_even_from_roots(spec: &ChainSpec, roots: &EvenRootSet) -> EigenSystem {
    let n = spec.n_sites();
    let half = n / 2;
    let (d1, d2) = (spec.d1(), spec.d2());
    let nf = n as f64;
    let mut values = vec![0.0; n];
    let mut vectors = vec![0.0; n * n];

    // Trigonometric branch: nu = 1..N/2-1 and their partners N+1-nu.
    for (i, &x) in roots.x_roots.iter().enumerate() {
        let nu = i + 1;
        let a = SQRT_2 / (nf + 1.0 - ((nf + 1.0) * x).sin() / x.sin()).sqrt();
        let lambda = (d1 * d1 + d2 * d2 + 2.0 * d1 * d2 * x.cos()).sqrt();
        for (col, sign) in [(nu, 1.0), (n + 1 - nu, -1.0)] {
            let b = a * parity_sign(col + 1);
            values[col - 1] = sign * lambda;
            let column = &mut vectors[(col - 1) * n..col * n];
            for k in 1..=n {
                column[k - 1] = if k % 2 == 0 {
                    a * (k as f64 * x / 2.0).sin()
                } else {
                    b * ((n - k + 1) as f64 * x / 2.0).sin()
                };
            }
        }
    }

    // Hyperbolic pair nu = N/2, N/2+1.
    let y = roots.y_root;
    let a = SQRT_2 / (((nf + 1.0) * y).sinh() / y.sinh() - nf - 1.0).sqrt();
    let lambda = roots.hyperbolic_lambda(d1, spec.delta());
    for (col, sign) in [(half, 1.0), (half + 1, -1.0)] {
        let b = a * parity_sign(col + 1);
        values[col - 1] = sign * lambda;
        let column = &mut vectors[(col - 1) * n..col * n];
        for k in 1..=n {
            column[k - 1] = if k % 2 == 0 {
                a * parity_sign(k / 2) * (k as f64 * y / 2.0).sinh()
            } else {
                let m = n - k + 1;
                b * parity_sign(m / 2) * (m as f64 * y / 2.0).sinh()
            };
        }
    }

    EigenSystem::from_parts(values, vectors, Provenance::AnalyticEven)
}

/// `(delta^2 - 1) / (delta^(N+1) - 1)` written as `1 / sum_{k=0}^{(N-1)/2} delta^(2k)`,
/// which stays exact at `delta = 1`.
pub(crate) fn zero_mode_weight_sq(delta: f64, n_sites: usize) -> f64 {
    let m = (n_sites - 1) / 2;
    let d2 = delta * delta;
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..=m {
        sum += term;
        term *= d2;
    }
    1.0 / sum
}

pub fn eigensystem_odd(spec: &ChainSpec) -> Result<EigenSystem> {
    spec.require_zero_field()?;
    if spec.is_even() {
        return Err(Error::Domain(format!(
            "odd-chain formulas need odd N, got {}",
            spec.n_sites()
        )));
    }
    let n = spec.n_sites();
    let mid = (n + 1) / 2;
    let delta = spec.delta();
    let d1 = spec.d1();
    let np1 = (n + 1) as f64;
    let amp = (2.0 / np1).sqrt();
    let mut values = vec![0.0; n];
    let mut vectors = vec![0.0; n * n];

    for nu in 1..=n {
        let column = &mut vectors[(nu - 1) * n..nu * n];
        if nu == mid {
            let b = zero_mode_weight_sq(delta, n).sqrt();
            for j in (1..=n).step_by(2) {
                column[j - 1] = b * (-delta).powi(((n - j) / 2) as i32);
            }
            continue;
        }
        let angle = PI * nu as f64 / np1;
        let spread = 1.0 + 2.0 * delta * (2.0 * angle).cos() + delta * delta;
        let lambda = if nu < mid {
            d1 * spread.sqrt()
        } else {
            -d1 * spread.sqrt()
        };
        values[nu - 1] = lambda;
        for j in 1..=n {
            let jf = j as f64;
            column[j - 1] = if j % 2 == 1 {
                amp * d1 / lambda * (delta * (angle * (jf - 1.0)).sin() + (angle * (jf + 1.0)).sin())
            } else {
                amp * (angle * jf).sin()
            };
        }
    }
    Ok(EigenSystem::from_parts(values, vectors, Provenance::AnalyticOdd))
}

pub fn eigensystem_numeric(matrix: &CouplingMatrix) -> Result<EigenSystem> {
    let n = matrix.size();
    let (values, vectors) = ql_implicit(matrix.diagonal(), matrix.off_diagonal())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let mut sorted_values = Vec::with_capacity(n);
    let mut sorted_vectors = Vec::with_capacity(n * n);
    for &src in &order {
        sorted_values.push(values[src]);
        let column = &vectors[src * n..(src + 1) * n];
        let sign = column
            .iter()
            .find(|c| c.abs() > 1e-10)
            .map_or(1.0, |c| c.signum());
        sorted_vectors.extend(column.iter().map(|c| sign * c));
    }
    Ok(EigenSystem::from_parts(
        sorted_values,
        sorted_vectors,
        Provenance::Numeric,
    ))
}

/// Closed form where it applies, numeric otherwise.
pub fn eigensystem(spec: &ChainSpec) -> Result<EigenSystem> {
    let zero_field = spec.require_zero_field().is_ok();
    if zero_field && !spec.is_even() {
        return eigensystem_odd(spec);
    }
    if zero_field
        && spec.n_sites() <= ANALYTIC_EVEN_MAX_SITES
        && spec.delta() > spec.even_regime_threshold() * (1.0 + 1e-6)
    {
        if let Ok(eig) = eigensystem_even(spec) {
            return Ok(eig);
        }
    }
    eigensystem_numeric(&build_coupling_matrix(spec))
}
