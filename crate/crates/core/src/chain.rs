//! Chain parameters and the single-excitation coupling matrix.
//!
//! Bonds alternate `D1, D2, D1, ...` starting from the first site, so an
//! even chain ends on a `D1` bond and an odd chain on a `D2` bond.

use crate::error::{Error, Result};

/// An open alternating chain with `n_sites` spins.
///
/// Times throughout the crate are physical times in units where the
/// couplings are given; with the default `d1 = 1` they are the
/// dimensionless product `D1 t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    n_sites: usize,
    d1: f64,
    delta: f64,
    larmor: Vec<f64>,
}

impl ChainSpec {
    /// Chain with `D1 = 1` and zero Larmor frequencies.
    pub fn new(n_sites: usize, delta: f64) -> Result<Self> {
        Self::with_coupling(n_sites, 1.0, delta)
    }

    pub fn with_coupling(n_sites: usize, d1: f64, delta: f64) -> Result<Self> {
        Self::with_larmor(n_sites, d1, delta, vec![0.0; n_sites])
    }

    pub fn with_larmor(n_sites: usize, d1: f64, delta: f64, larmor: Vec<f64>) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidSpec(format!(
                "n_sites = {n_sites}, need at least 2"
            )));
        }
        if !(d1.is_finite() && d1 > 0.0) {
            return Err(Error::InvalidSpec(format!("d1 = {d1} must be positive")));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidSpec(format!("delta = {delta} must be positive")));
        }
        if larmor.len() != n_sites {
            return Err(Error::InvalidSpec(format!(
                "larmor has {} entries for {n_sites} sites",
                larmor.len()
            )));
        }
        if larmor.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidSpec("larmor entries must be finite".into()));
        }
        Ok(Self {
            n_sites,
            d1,
            delta,
            larmor,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }

    pub fn d2(&self) -> f64 {
        self.d1 * self.delta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn larmor(&self) -> &[f64] {
        &self.larmor
    }

    pub fn is_even(&self) -> bool {
        self.n_sites % 2 == 0
    }

    /// Coupling on the bond between sites `n` and `n + 1` (1-based).
    pub fn bond(&self, n: usize) -> f64 {
        if n % 2 == 1 {
            self.d1
        } else {
            self.d2()
        }
    }

    /// Rejects specs with a nonzero field; closed-form paths assume `w_n = 0`.
    pub fn require_zero_field(&self) -> Result<()> {
        match self.larmor.iter().position(|&w| w != 0.0) {
            None => Ok(()),
            Some(i) => Err(Error::InvalidSpec(format!(
                "closed-form evaluation needs zero Larmor field, site {} has {}",
                i + 1,
                self.larmor[i]
            ))),
        }
    }

    /// Threshold `(N + 2) / N` above which the even-chain formulas hold.
    pub fn even_regime_threshold(&self) -> f64 {
        (self.n_sites as f64 + 2.0) / self.n_sites as f64
    }
}

/// Symmetric tridiagonal matrix `D` of the quadratic fermion form.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl CouplingMatrix {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        Ok(Self {
            diagonal,
            off_diagonal,
        })
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Entry `(n, n + 1)` at index `n - 1`.
    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match row.abs_diff(col) {
            0 => self.diagonal[row],
            1 => self.off_diagonal[row.min(col)],
            _ => 0.0,
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc += self.off_diagonal[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off_diagonal[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.diagonal
            .iter()
            .chain(&self.off_diagonal)
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

pub fn build_coupling_matrix(spec: &ChainSpec) -> CouplingMatrix {
    let off = (1..spec.n_sites()).map(|n| spec.bond(n)).collect();
    CouplingMatrix {
        diagonal: spec.larmor().to_vec(),
        off_diagonal: off,
    }
}
