//! Orthonormal polynomial systems given by three-term recurrences
//! `x p_i = a_i p_{i+1} + b_i p_i + a_{i-1} p_{i-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{BasisId, MeasureSpec};
use crate::spectral::JacobiOperator;
use crate::tridiag;

/// Recurrence coefficients `a_0..a_{m-1}`, `b_0..b_m` of an orthonormal system
/// and the total mass of its measure (`p_0 = mass^{-1/2}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub mass: f64,
}

impl RecurrenceCoeffs {
    pub fn new(a: Vec<f64>, b: Vec<f64>, mass: f64) -> Result<Self> {
        if b.len() != a.len() + 1 {
            return Err(Error::DimensionMismatch(a.len() + 1, b.len()));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidInput(format!("measure mass {mass} is not positive")));
        }
        if let Some((index, &value)) = a.iter().enumerate().find(|(_, &v)| !(v > 0.0 && v.is_finite())) {
            return Err(Error::NonPositiveRecurrence { index, value });
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite diagonal recurrence coefficient".into()));
        }
        Ok(Self { a, b, mass })
    }

    /// Highest degree `m` for which `p_m` and `J_m` are available.
    pub fn max_degree(&self) -> usize {
        self.b.len() - 1
    }

    pub fn p0(&self) -> f64 {
        self.mass.sqrt().recip()
    }

    pub fn truncated(&self, m: usize) -> Result<Self> {
        self.check_degree(m)?;
        Ok(Self { a: self.a[..m].to_vec(), b: self.b[..=m].to_vec(), mass: self.mass })
    }

    pub fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.max_degree() {
            Err(Error::DegreeExceeded { requested: k, max: self.max_degree() })
        } else {
            Ok(())
        }
    }

    /// Fills `out` with `p_0(x), ..., p_{out.len()-1}(x)`.
    ///
    /// # Panics
    /// If `out.len() - 1` exceeds [`max_degree`](Self::max_degree).
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let Some(first) = out.first_mut() else { return };
        *first = self.p0();
        if out.len() > 1 {
            out[1] = (x - self.b[0]) * out[0] / self.a[0];
        }
        for i in 1..out.len().saturating_sub(1) {
            out[i + 1] = ((x - self.b[i]) * out[i] - self.a[i - 1] * out[i - 1]) / self.a[i];
        }
    }

    /// `p_0(x), ..., p_k(x)`.
    pub fn eval_upto(&self, k: usize, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; k + 1];
        self.eval_into(x, &mut out);
        out
    }

    /// Values and first derivatives of `p_0..p_{len-1}` at `x`.
    pub fn eval_with_derivative_into(&self, x: f64, val: &mut [f64], der: &mut [f64]) {
        let len = val.len();
        if len == 0 {
            return;
        }
        val[0] = self.p0();
        der[0] = 0.0;
        if len > 1 {
            val[1] = (x - self.b[0]) * val[0] / self.a[0];
            der[1] = val[0] / self.a[0];
        }
        for i in 1..len.saturating_sub(1) {
            let (ai, aim) = (self.a[i], self.a[i - 1]);
            val[i + 1] = ((x - self.b[i]) * val[i] - aim * val[i - 1]) / ai;
            der[i + 1] = (val[i] + (x - self.b[i]) * der[i] - aim * der[i - 1]) / ai;
        }
    }

    /// `sum_i coeffs[i] p_i(x)` by Clenshaw summation.
    pub fn eval_series(&self, coeffs: &[f64], x: f64) -> f64 {
        let m = coeffs.len();
        if m == 0 {
            return 0.0;
        }
        // y_i = c_i + ((x - b_i)/a_i) y_{i+1} - (a_i/a_{i+1}) y_{i+2}
        let mut y1 = 0.0;
        let mut y2 = 0.0;
        for i in (0..m).rev() {
            let next = if i + 1 < m { (x - self.b[i]) / self.a[i] * y1 } else { 0.0 };
            let next2 = if i + 2 < m { self.a[i] / self.a[i + 1] * y2 } else { 0.0 };
            let y = coeffs[i] + next - next2;
            y2 = y1;
            y1 = y;
        }
        y1 * self.p0()
    }
}

/// Orthonormal recurrence of the discrete measure `sum_j w_j delta_{x_j}` up to
/// degree `top` by the Stieltjes procedure, with one pass of
/// reorthogonalization per step to keep discrete high-degree tables accurate.
pub fn stieltjes(nodes: &[f64], weights: &[f64], top: usize) -> Result<RecurrenceCoeffs> {
    let npts = nodes.len();
    if npts == 0 || npts != weights.len() {
        return Err(Error::DimensionMismatch(npts, weights.len()));
    }
    if top >= npts {
        return Err(Error::DegreeExceeded { requested: top, max: npts - 1 });
    }
    let mass: f64 = weights.iter().sum();
    let p0 = mass.sqrt().recip();
    let mut history: Vec<Vec<f64>> = Vec::with_capacity(top + 1);
    history.push(vec![p0; npts]);
    let mut a = Vec::with_capacity(top);
    let mut b = Vec::with_capacity(top + 1);
    let inner = |u: &[f64], v: &[f64]| -> f64 {
        u.iter().zip(v).zip(weights).map(|((u, v), w)| u * v * w).sum()
    };
    for i in 0..=top {
        let cur = &history[i];
        let bi: f64 = nodes.iter().zip(cur).zip(weights).map(|((x, p), w)| x * p * p * w).sum();
        b.push(bi);
        if i == top {
            break;
        }
        let mut q: Vec<f64> = (0..npts)
            .map(|j| {
                let prev = if i > 0 { a[i - 1] * history[i - 1][j] } else { 0.0 };
                (nodes[j] - bi) * cur[j] - prev
            })
            .collect();
        for past in &history {
            let c = inner(&q, past);
            for (qj, pj) in q.iter_mut().zip(past) {
                *qj -= c * pj;
            }
        }
        let ai = inner(&q, &q).sqrt();
        if !(ai > 0.0) || !ai.is_finite() {
            return Err(Error::NonPositiveRecurrence { index: i, value: ai });
        }
        a.push(ai);
        for qj in q.iter_mut() {
            *qj /= ai;
        }
        history.push(q);
    }
    RecurrenceCoeffs::new(a, b, mass)
}

/// Recurrence coefficients of `basis` truncated at degree `m`.
pub fn recurrence_coeffs(spec: &MeasureSpec, basis: BasisId, m: usize) -> Result<RecurrenceCoeffs> {
    spec.table(basis)?.truncated(m)
}

/// Value of the degree-`i` orthonormal polynomial of `basis` at `x`.
pub fn eval_basis(spec: &MeasureSpec, basis: BasisId, i: usize, x: f64) -> Result<f64> {
    let t = spec.table(basis)?;
    t.check_degree(i)?;
    Ok(t.eval_upto(i, x)[i])
}

/// The `(k+1) x (k+1)` truncation `J_k` of the Jacobi matrix of `basis`.
pub fn jacobi_matrix(spec: &MeasureSpec, basis: BasisId, k: usize) -> Result<JacobiOperator> {
    let t = spec.table(basis)?;
    t.check_degree(k)?;
    Ok(JacobiOperator::new(t.b[..=k].to_vec(), t.a[..k].to_vec(), None, basis))
}

/// Zeros of the degree-`k` polynomial of `basis`, ascending, as the spectrum of
/// `J_{k-1}`.
pub fn zeros(spec: &MeasureSpec, basis: BasisId, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let t = spec.table(basis)?;
    t.check_degree(k)?;
    tridiag::eigenvalues(&t.b[..k], &t.a[..k - 1])
}

/// Largest zero of the degree-`k` polynomial of `basis`; `-1` for `k = 0`.
pub fn largest_zero(spec: &MeasureSpec, basis: BasisId, k: usize) -> Result<f64> {
    if k == 0 {
        return Ok(-1.0);
    }
    let t = spec.table(basis)?;
    t.check_degree(k)?;
    tridiag::kth_eigenvalue(&t.b[..k], &t.a[..k - 1], k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{hamming_space, sphere_space, MeasureVariant};

    const BASE: BasisId = MeasureVariant::Base;
    const MINUS: BasisId = MeasureVariant::Minus;
    const PM: BasisId = MeasureVariant::PlusMinus;

    #[test]
    fn hamming_four_coefficients() {
        let spec = hamming_space(4).unwrap();
        let r = recurrence_coeffs(&spec, BASE, 3).unwrap();
        let s6 = 6f64.sqrt() / 4.0;
        let expect = [0.5, s6, s6];
        for (a, e) in r.a.iter().zip(expect) {
            assert!((a - e).abs() < 1e-15);
        }
        assert!(r.b.iter().all(|&b| b == 0.0));
        assert_eq!(spec.table(BASE).unwrap().a.len(), 4);
        assert!((spec.table(BASE).unwrap().a[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hamming_minus_matches_shifted_krawtchouk_coefficients() {
        for n in [3usize, 4, 9, 32, 64, 128] {
            let spec = hamming_space(n).unwrap();
            let t = spec.table(MINUS).unwrap();
            assert_eq!(t.max_degree(), n - 1);
            for (i, b) in t.b.iter().enumerate() {
                assert!((b + 1.0 / n as f64).abs() < 1e-12, "n={n} b_{i} = {b}");
            }
            for (i, a) in t.a.iter().enumerate() {
                let e = (((n - 1 - i) * (i + 1)) as f64).sqrt() / n as f64;
                assert!((a - e).abs() < 1e-12, "n={n} a_{i} = {a} vs {e}");
            }
            assert!((t.mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hamming_plusminus_coefficients() {
        for n in [4usize, 10, 64] {
            let spec = hamming_space(n).unwrap();
            let t = spec.table(PM).unwrap();
            assert_eq!(t.max_degree(), n - 2);
            assert!(t.b.iter().all(|b| b.abs() < 1e-12));
            for (i, a) in t.a.iter().enumerate() {
                let e = (((n - 2 - i) * (i + 1)) as f64).sqrt() / n as f64;
                assert!((a - e).abs() < 1e-12);
            }
            assert!((t.mass - (n as f64 - 1.0) / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_three_first_coefficient() {
        let spec = sphere_space(3).unwrap();
        let a0 = spec.table(BASE).unwrap().a[0];
        assert!((a0 - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let f2 = spec.moment(BASE, |x| x * x, 2).unwrap();
        assert!((a0 * a0 - f2).abs() < 1e-14);
    }

    // Jacobi-weight (1-x)^al (1+x)^be orthonormal coefficients, scaled measure.
    fn jacobi_ab(al: f64, be: f64, i: usize) -> (f64, f64) {
        let n = i as f64;
        let s = 2.0 * n + al + be;
        let b = if s == 0.0 { (be - al) / (al + be + 2.0) } else { (be * be - al * al) / (s * (s + 2.0)) };
        let a2 = 4.0 * (n + 1.0) * (n + al + 1.0) * (n + be + 1.0) * (n + al + be + 1.0)
            / ((s + 1.0) * (s + 2.0) * (s + 2.0) * (s + 3.0));
        (a2.sqrt(), b)
    }

    #[test]
    fn sphere_adjacent_tables_match_jacobi_closed_forms() {
        for d in [3usize, 4, 8] {
            let spec = sphere_space(d).unwrap();
            let g = (d as f64 - 3.0) / 2.0;
            for (basis, al, be) in [(MINUS, g + 1.0, g), (PM, g + 1.0, g + 1.0)] {
                let t = spec.table(basis).unwrap();
                for i in 0..t.max_degree() {
                    let (a, b) = jacobi_ab(al, be, i);
                    assert!((t.a[i] - a).abs() < 1e-11, "d={d} {basis} a_{i}: {} vs {a}", t.a[i]);
                    assert!((t.b[i] - b).abs() < 1e-11, "d={d} {basis} b_{i}: {} vs {b}", t.b[i]);
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let spec = hamming_space(4).unwrap();
        assert_eq!(eval_basis(&spec, BASE, 0, 0.3).unwrap(), 1.0);
        assert!((eval_basis(&spec, BASE, 1, 1.0).unwrap() - 2.0).abs() < 1e-15);
        let p2 = eval_basis(&spec, BASE, 2, 0.25).unwrap();
        assert!((p2 - (8.0 * 0.0625 - 2.0) / 6f64.sqrt()).abs() < 1e-15);
        assert!((p2 + 0.612372435695794).abs() < 1e-12);
        assert!(eval_basis(&spec, BASE, 5, 0.0).is_err());
    }

    #[test]
    fn adjacent_p0_is_unit_norm() {
        let spec = hamming_space(7).unwrap();
        for v in [MINUS, PM] {
            let p0 = eval_basis(&spec, v, 0, 0.1).unwrap();
            let norm = spec.moment(v, |_| p0 * p0, 0).unwrap();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_matrix_examples() {
        let spec = hamming_space(4).unwrap();
        let j = jacobi_matrix(&spec, BASE, 1).unwrap();
        assert_eq!(j.dense(), vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        let j0 = jacobi_matrix(&spec, BASE, 0).unwrap();
        assert_eq!(j0.dense(), vec![vec![0.0]]);
        let jm = jacobi_matrix(&spec, MINUS, 1).unwrap();
        for i in 0..2 {
            assert!((jm.diag[i] + 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn zeros_examples() {
        let spec = hamming_space(4).unwrap();
        assert_eq!(zeros(&spec, BASE, 0).unwrap(), Vec::<f64>::new());
        assert_eq!(largest_zero(&spec, BASE, 0).unwrap(), -1.0);
        let z1 = zeros(&spec, BASE, 1).unwrap();
        assert_eq!(z1.len(), 1);
        assert!(z1[0].abs() < 1e-13);
        let z2 = zeros(&spec, BASE, 2).unwrap();
        assert!((z2[0] + 0.5).abs() < 1e-13 && (z2[1] - 0.5).abs() < 1e-13);
        let spec3 = hamming_space(3).unwrap();
        let zm = zeros(&spec3, MINUS, 1).unwrap();
        assert!((zm[0] + 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn zeros_are_roots() {
        let spec = hamming_space(20).unwrap();
        for v in MeasureVariant::ALL {
            for k in 1..=spec.max_degree(v).unwrap() {
                for z in zeros(&spec, v, k).unwrap() {
                    let vals = spec.table(v).unwrap().eval_upto(k, z);
                    let scale: f64 = vals.iter().map(|p| p.abs()).sum::<f64>().max(1.0);
                    assert!(vals[k].abs() < 1e-9 * scale, "{v} k={k} z={z}: {}", vals[k]);
                }
            }
        }
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let spec = sphere_space(6).unwrap();
        let t = spec.table(MINUS).unwrap();
        let coeffs = [0.3, -1.0, 0.25, 2.0, 0.0, -0.7];
        for x in [-0.9, -0.2, 0.0, 0.55, 1.0] {
            let vals = t.eval_upto(5, x);
            let direct: f64 = coeffs.iter().zip(&vals).map(|(c, p)| c * p).sum();
            assert!((t.eval_series(&coeffs, x) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let spec = hamming_space(12).unwrap();
        let t = spec.table(PM).unwrap();
        let mut v = vec![0.0; 8];
        let mut d = vec![0.0; 8];
        let x = 0.37;
        t.eval_with_derivative_into(x, &mut v, &mut d);
        let h = 1e-6;
        let up = t.eval_upto(7, x + h);
        let dn = t.eval_upto(7, x - h);
        for i in 0..8 {
            let fd = (up[i] - dn[i]) / (2.0 * h);
            assert!((fd - d[i]).abs() < 1e-6 * (1.0 + d[i].abs()), "i={i}");
        }
    }

    #[test]
    fn nonpositive_a_rejected() {
        assert!(matches!(
            RecurrenceCoeffs::new(vec![0.5, 0.0], vec![0.0; 3], 1.0),
            Err(Error::NonPositiveRecurrence { index: 1, .. })
        ));
    }
}
