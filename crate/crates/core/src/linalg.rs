//! Small dense linear algebra used by the fitters.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Solves `A x = b` for a square row-major `A` by Gaussian elimination with
/// partial pivoting. `A` is singular when a pivot drops below
/// `rel_tol * max|A|`.
pub fn solve(n: usize, a: &[f64], b: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut m: Vec<f64> = a.to_vec();
    let mut rhs: Vec<f64> = b.to_vec();
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Singular("zero or non-finite matrix".into()));
    }
    for col in 0..n {
        let (piv, pval) =
            (col..n).map(|r| (r, m[r * n + col].abs())).fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if pval <= rel_tol * scale {
            return Err(Error::Singular(alloc::format!("pivot {pval:e} in column {col}")));
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            rhs.swap(col, piv);
        }
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            if f != 0.0 {
                for k in col..n {
                    m[r * n + k] -= f * m[col * n + k];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut x = alloc::vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for k in r + 1..n {
            s -= m[r * n + k] * x[k];
        }
        x[r] = s / m[r * n + r];
    }
    Ok(x)
}

/// Eigen-decomposition of the symmetric matrix `[[a, b], [b, c]]`.
/// Returns `(λ_small, λ_large, angle of the λ_large eigenvector)`.
pub fn sym2_eigen(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let mean = 0.5 * (a + c);
    let d = Float::sqrt(0.25 * (a - c) * (a - c) + b * b);
    let angle = 0.5 * Float::atan2(2.0 * b, a - c);
    (mean - d, mean + d, angle)
}

/// Linear least squares `min ‖A x − b‖` via the normal equations.
pub fn least_squares(rows: usize, cols: usize, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let mut ata = alloc::vec![0.0; cols * cols];
    let mut atb = alloc::vec![0.0; cols];
    for r in 0..rows {
        let row = &a[r * cols..(r + 1) * cols];
        for i in 0..cols {
            atb[i] += row[i] * b[r];
            for j in 0..cols {
                ata[i * cols + j] += row[i] * row[j];
            }
        }
    }
    solve(cols, &ata, &atb, 1e-14)
}
