//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.
//!
//! Eigenvectors come from accumulating the Givens rotations, which keeps
//! them orthonormal to working precision.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (unsorted) and column-major eigenvectors of the tridiagonal
/// matrix with `diagonal` and `off_diagonal` (entry `(i, i+1)` at index `i`).
pub(crate) fn ql_implicit(diagonal: &[f64], off_diagonal: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diagonal.len();
    let mut d = diagonal.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off_diagonal);
    // z[col * n + row]
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut shift_acc = 0.0;
    let mut scale: f64 = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        scale = scale.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * scale {
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations,
                        residual: e[l].abs(),
                    });
                }
                // Wilkinson-type shift from the leading 2x2 block.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                shift_acc += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for k in 0..n {
                        let zh = col_next[k];
                        col_next[k] = s * col_i[k] + c * zh;
                        col_i[k] = c * col_i[k] - s * zh;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * scale {
                    break;
                }
            }
        }
        d[l] += shift_acc;
        e[l] = 0.0;
    }
    Ok((d, z))
}
