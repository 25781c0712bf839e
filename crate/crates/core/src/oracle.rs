//! Brute-force evolution in the full `2^N` spin space.
//!
//! Basis state `i` has spin `n` flipped against the field when bit `n - 1`
//! of `i` is set. The Hamiltonian is
//! `sum_n (w_n / 2)(I_nz + 1/2) + sum_n D_n (I_nx I_(n+1)x + I_ny I_(n+1)y)`,
//! which is `c^+ D c / 2` after the Jordan-Wigner map, so its
//! single-excitation block is `D / 2` and the reduced dynamics can be
//! checked end to end.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

pub const MAX_SITES: usize = 12;
/// Largest chain diagonalized densely; longer chains use the series propagator.
pub const DENSE_MAX_SITES: usize = 8;

const SERIES_TERM_TOL: f64 = 1e-17;

enum Method {
    Dense {
        energies: Vec<f64>,
        vectors: DMatrix<f64>,
    },
    Series {
        norm_bound: f64,
    },
}

pub struct FullSpaceOracle {
    n_sites: usize,
    diagonal: Vec<f64>,
    bonds: Vec<f64>,
    method: Method,
}

impl FullSpaceOracle {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let n = spec.n_sites();
        if n > MAX_SITES {
            return Err(Error::Resource(format!(
                "full-space oracle limited to N <= {MAX_SITES}, got {n}"
            )));
        }
        let dim = 1usize << n;
        let diagonal: Vec<f64> = (0..dim)
            .map(|i| {
                (0..n)
                    .filter(|b| i >> b & 1 == 1)
                    .map(|b| 0.5 * spec.larmor()[b])
                    .sum()
            })
            .collect();
        let bonds: Vec<f64> = (1..n).map(|b| spec.bond(b)).collect();

        let method = if n <= DENSE_MAX_SITES {
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for i in 0..dim {
                h[(i, i)] = diagonal[i];
                for (b, &coupling) in bonds.iter().enumerate() {
                    if (i >> b & 1) != (i >> (b + 1) & 1) {
                        let j = i ^ (0b11 << b);
                        h[(j, i)] = 0.5 * coupling;
                    }
                }
            }
            let eig = SymmetricEigen::new(h);
            Method::Dense {
                energies: eig.eigenvalues.iter().copied().collect(),
                vectors: eig.eigenvectors,
            }
        } else {
            let max_diag = diagonal.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
            let hop: f64 = bonds.iter().map(|b| 0.5 * b.abs()).sum();
            Method::Series {
                norm_bound: max_diag + hop,
            }
        };

        Ok(Self {
            n_sites: n,
            diagonal,
            bonds,
            method,
        })
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_sites
    }

    pub fn uses_dense(&self) -> bool {
        matches!(self.method, Method::Dense { .. })
    }

    fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = psi[i] * self.diagonal[i];
            for (b, &coupling) in self.bonds.iter().enumerate() {
                if (i >> b & 1) != (i >> (b + 1) & 1) {
                    acc += psi[i ^ (0b11 << b)] * (0.5 * coupling);
                }
            }
            *o = acc;
        }
    }

    /// `exp(-iHt)` applied to the state with only spin 1 flipped.
    pub fn state(&self, t: f64) -> Vec<Complex64> {
        let dim = self.dimension();
        let start = 1usize;
        match &self.method {
            Method::Dense { energies, vectors } => {
                let coeffs: Vec<Complex64> = energies
                    .iter()
                    .enumerate()
                    .map(|(m, &e)| Complex64::from_polar(vectors[(start, m)], -e * t))
                    .collect();
                (0..dim)
                    .map(|i| {
                        coeffs
                            .iter()
                            .enumerate()
                            .map(|(m, c)| c * vectors[(i, m)])
                            .sum()
                    })
                    .collect()
            }
            Method::Series { norm_bound } => {
                let mut psi = vec![Complex64::new(0.0, 0.0); dim];
                psi[start] = Complex64::new(1.0, 0.0);
                let steps = (norm_bound * t.abs()).ceil().max(1.0) as usize;
                let dt = t / steps as f64;
                let mut term = vec![Complex64::new(0.0, 0.0); dim];
                let mut next = vec![Complex64::new(0.0, 0.0); dim];
                for _ in 0..steps {
                    term.copy_from_slice(&psi);
                    for k in 1..60 {
                        self.apply(&term, &mut next);
                        let factor = Complex64::new(0.0, -dt / k as f64);
                        let mut norm_sq = 0.0;
                        for (tm, nx) in term.iter_mut().zip(&next) {
                            *tm = nx * factor;
                            norm_sq += tm.norm_sqr();
                        }
                        for (p, tm) in psi.iter_mut().zip(&term) {
                            *p += tm;
                        }
                        if norm_sq.sqrt() < SERIES_TERM_TOL {
                            break;
                        }
                    }
                }
                psi
            }
        }
    }

    /// `<N| exp(-iHt) |1>`.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let target = 1usize << (self.n_sites - 1);
        match &self.method {
            Method::Dense { energies, vectors } => energies
                .iter()
                .enumerate()
                .map(|(m, &e)| Complex64::from_polar(vectors[(target, m)] * vectors[(1, m)], -e * t))
                .sum(),
            Method::Series { .. } => self.state(t)[target],
        }
    }

    /// Expectation of the total z-projection `sum_n I_nz`.
    pub fn magnetization(&self, t: f64) -> f64 {
        let n = self.n_sites as f64;
        self.state(t)
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * (i.count_ones() as f64 - 0.5 * n))
            .sum()
    }
}

pub fn full_space_amplitude(spec: &ChainSpec, t: f64) -> Result<Complex64> {
    Ok(FullSpaceOracle::new(spec)?.amplitude(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_exchange() {
        let s = ChainSpec::new(2, 3.0).unwrap();
        for i in 0..40 {
            let t = 0.37 * i as f64;
            let p = full_space_amplitude(&s, t).unwrap().norm_sqr();
            assert!((p - (t / 2.0).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn n4_reference_peak() {
        let s = ChainSpec::new(4, 2.272).unwrap();
        let p = full_space_amplitude(&s, 8.303).unwrap().norm_sqr();
        assert!((p - 0.999).abs() <= 1e-3);
    }

    #[test]
    fn size_guard() {
        let s = ChainSpec::new(13, 2.0).unwrap();
        assert!(matches!(FullSpaceOracle::new(&s), Err(Error::Resource(_))));
    }

    #[test]
    fn dense_and_series_agree() {
        // Force the series path on a small chain by comparing against N=8 dense.
        let s = ChainSpec::new(8, 2.557).unwrap();
        let dense = FullSpaceOracle::new(&s).unwrap();
        let series = FullSpaceOracle {
            n_sites: 8,
            diagonal: dense.diagonal.clone(),
            bonds: dense.bonds.clone(),
            method: Method::Series {
                norm_bound: 0.5 * dense.bonds.iter().sum::<f64>(),
            },
        };
        for t in [0.0, 1.3, 17.0, 58.966] {
            let d = dense.amplitude(t);
            let r = series.amplitude(t);
            assert!((d - r).norm() < 1e-10, "t={t}: {d} vs {r}");
        }
    }

    #[test]
    fn magnetization_conserved() {
        let s = ChainSpec::with_larmor(5, 1.0, 1.6, vec![0.2, -0.4, 0.0, 0.9, 0.1]).unwrap();
        let o = FullSpaceOracle::new(&s).unwrap();
        let m0 = o.magnetization(0.0);
        assert!((m0 - (1.0 - 2.5)).abs() < 1e-12);
        for i in 1..20 {
            assert!((o.magnetization(1.1 * i as f64) - m0).abs() < 1e-10);
        }
    }
}
