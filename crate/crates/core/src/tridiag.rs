//! Eigenvalues of symmetric tridiagonal matrices.
//!
//! Eigenvalues are found by Sturm-sequence bisection, which brackets each one
//! and cannot miss or duplicate a root. Full eigenpairs of small dense
//! symmetric matrices go through `nalgebra`'s implicit QL solver.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Absolute accuracy guaranteed for every bisected eigenvalue.
pub const EIGEN_TOL: f64 = 1e-13;

const MAX_BISECTIONS: usize = 256;

/// Number of eigenvalues strictly below `lambda`.
///
/// `diag` has length `m`, `off` has length `m - 1`.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let guard = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = d - lambda - coupling;
        if q.abs() < guard {
            q = -guard;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let m = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < m { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 1e-3 * (hi - lo).abs().max(1.0);
    (lo - pad, hi + pad)
}

/// The `index`-th smallest eigenvalue (0-based).
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], index: usize) -> Result<f64> {
    let m = diag.len();
    if index >= m {
        return Err(Error::InvalidInput(format!(
            "eigenvalue index {index} out of range for order {m}"
        )));
    }
    if off.len() + 1 != m {
        return Err(Error::DimensionMismatch(off.len() + 1, m));
    }
    let (mut lo, mut hi) = gershgorin(diag, off);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi - lo > EIGEN_TOL {
        return Err(Error::Eigen(format!(
            "bisection for eigenvalue {index} stalled with bracket [{lo}, {hi}]"
        )));
    }
    Ok(0.5 * (lo + hi))
}

/// All eigenvalues in ascending order.
pub fn eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    (0..diag.len()).map(|i| kth_eigenvalue(diag, off, i)).collect()
}

/// Eigenpairs of a dense symmetric tridiagonal matrix, ascending by eigenvalue.
/// Each eigenvector has unit Euclidean norm.
pub fn eigenpairs(diag: &[f64], off: &[f64]) -> Result<Vec<(f64, Vec<f64>)>> {
    let m = diag.len();
    if off.len() + 1 != m {
        return Err(Error::DimensionMismatch(off.len() + 1, m));
    }
    let mat = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            diag[r]
        } else if r + 1 == c {
            off[r]
        } else if c + 1 == r {
            off[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(mat.clone(), f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Eigen(format!("symmetric QL did not converge on matrix {mat}"))
    })?;
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..m)
        .map(|j| {
            let v: Vec<f64> = eig.eigenvectors.column(j).iter().copied().collect();
            (eig.eigenvalues[j], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_count_two_by_two() {
        // [[1, -1], [-1, 3]] has eigenvalues 2 -+ sqrt(2)
        let d = [1.0, 3.0];
        let e = [-1.0];
        assert_eq!(sturm_count(&d, &e, 0.0), 0);
        assert_eq!(sturm_count(&d, &e, 1.0), 1);
        assert_eq!(sturm_count(&d, &e, 4.0), 2);
    }

    #[test]
    fn chain_eigenvalues_match_cosines() {
        let m = 40;
        let d = vec![0.0; m];
        let e = vec![1.0; m - 1];
        let ev = eigenvalues(&d, &e).unwrap();
        for (j, lam) in ev.iter().enumerate() {
            let k = (m - j) as f64;
            let exact = 2.0 * (k * std::f64::consts::PI / (m as f64 + 1.0)).cos();
            assert!((lam - exact).abs() < EIGEN_TOL, "{lam} vs {exact}");
        }
    }

    #[test]
    fn one_by_one() {
        assert_eq!(eigenvalues(&[-0.25], &[]).unwrap(), vec![-0.25]);
    }

    #[test]
    fn eigenpairs_agree_with_bisection() {
        let d = [0.3, -0.1, 0.7, 0.0];
        let e = [0.5, 0.2, 0.9];
        let bis = eigenvalues(&d, &e).unwrap();
        let pairs = eigenpairs(&d, &e).unwrap();
        for ((lam, v), b) in pairs.iter().zip(&bis) {
            assert!((lam - b).abs() < 1e-12);
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_diagonal_eigenvalues() {
        let ev = eigenvalues(&[2.0, 2.0, -1.0], &[0.0, 0.0]).unwrap();
        assert!((ev[0] + 1.0).abs() < EIGEN_TOL);
        assert!((ev[1] - 2.0).abs() < EIGEN_TOL);
        assert!((ev[2] - 2.0).abs() < EIGEN_TOL);
    }
}
