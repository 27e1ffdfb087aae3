//! Rank-one corner perturbations `T_k = J_k + rho e_k e_k^T` of truncated Jacobi
//! matrices and the bounds read off their top eigenfunctions.

use serde::{Deserialize, Serialize};

use crate::constructions::{
    lev_even_poly, lev_odd_poly, mrrw_bound_closed, BoundPolynomial, BoundResult, Method,
};
use crate::error::{Error, Result};
use crate::feasibility::Tolerances;
use crate::orthopoly::largest_zero;
use crate::spaces::{BasisId, MeasureSpec, MeasureVariant};
use crate::tridiag;

/// `|p_k(s)|` below this makes the corner entry singular.
pub const SINGULAR_PK: f64 = 1e-12;

/// Symmetric tridiagonal operator, optionally with a corner perturbation at
/// `(k, k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub rho: Option<f64>,
    pub basis: BasisId,
}

impl JacobiOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, rho: Option<f64>, basis: BasisId) -> Self {
        debug_assert_eq!(diag.len(), off.len() + 1);
        Self { diag, off, rho, basis }
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal including the corner perturbation.
    pub fn effective_diag(&self) -> Vec<f64> {
        let mut d = self.diag.clone();
        if let (Some(r), Some(last)) = (self.rho, d.last_mut()) {
            *last += r;
        }
        d
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let m = self.order();
        let d = self.effective_diag();
        (0..m)
            .map(|r| {
                (0..m)
                    .map(|c| match () {
                        _ if r == c => d[r],
                        _ if r + 1 == c => self.off[r],
                        _ if c + 1 == r => self.off[c],
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let d = self.effective_diag();
        (0..self.order())
            .map(|i| {
                let mut acc = d[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < self.order() {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let d = self.effective_diag();
        (0..self.order())
            .map(|i| {
                let mut acc = d[i].abs();
                if i > 0 {
                    acc += self.off[i - 1].abs();
                }
                if i + 1 < self.order() {
                    acc += self.off[i].abs();
                }
                acc
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub value: f64,
    /// Unit norm, first entry positive.
    pub vector: Vec<f64>,
    /// `||T v - value v||_2`.
    pub residual: f64,
    /// `max(1, ||T||_inf)`, against which `residual` is judged.
    pub scale: f64,
}

impl EigenPair {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.scale
    }

    pub fn is_positive(&self) -> bool {
        self.vector.iter().all(|&v| v > 0.0)
    }
}

fn residual(op: &JacobiOperator, value: f64, v: &[f64]) -> f64 {
    op.apply(v).iter().zip(v).map(|(tv, vi)| (tv - value * vi).powi(2)).sum::<f64>().sqrt()
}

fn normalize_sign(v: &mut [f64]) {
    let lead = v.iter().copied().find(|x| *x != 0.0).unwrap_or(1.0);
    if lead < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// `T_k(s) = J_k + rho e_k e_k^T` with `rho = a_k p_{k+1}(s) / p_k(s)`, the
/// operator for which `(p_0(s), ..., p_k(s))` is an eigenvector with eigenvalue
/// `s`.
pub fn build_tk(spec: &MeasureSpec, basis: BasisId, k: usize, s: f64) -> Result<JacobiOperator> {
    let t = spec.table(basis)?;
    t.check_degree(k + 1)?;
    let p = t.eval_upto(k + 1, s);
    if p[k].abs() < SINGULAR_PK {
        return Err(Error::SingularRho { k, s, value: p[k].abs() });
    }
    let rho = t.a[k] * p[k + 1] / p[k];
    Ok(JacobiOperator::new(t.b[..=k].to_vec(), t.a[..k].to_vec(), Some(rho), basis))
}

/// Largest eigenvalue and its unit eigenvector.
pub fn top_eigenpair(op: &JacobiOperator) -> Result<EigenPair> {
    let pairs = tridiag::eigenpairs(&op.effective_diag(), &op.off)?;
    let (value, mut vector) = pairs.into_iter().last().ok_or_else(|| Error::Eigen("empty operator".into()))?;
    normalize_sign(&mut vector);
    let res = residual(op, value, &vector);
    let pair = EigenPair { value, residual: res, scale: op.norm_inf().max(1.0), vector };
    if !(pair.relative_residual() <= 1e-9) {
        return Err(Error::Eigen(format!(
            "top eigenpair residual {:e} on operator {:?}",
            pair.residual,
            op.dense()
        )));
    }
    Ok(pair)
}

/// Outcome of checking that the kernel vector is an eigenvector of `T_k(s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelEigenCheck {
    pub operator: JacobiOperator,
    /// `||T_k(s) v - s v||_2` with `v = (p_0(s), ..., p_k(s))`.
    pub residual: f64,
    /// Same, divided by `||v||_2 max(1, ||T||_inf)`.
    pub relative_residual: f64,
    /// `s > x_k`, where the kernel vector must be the top eigenvector.
    pub above_largest_zero: bool,
    pub top: EigenPair,
    /// `|lambda_top - s|`.
    pub eigenvalue_gap: f64,
    /// Largest entrywise gap between the normalized kernel vector and the top
    /// eigenvector.
    pub vector_gap: f64,
}

impl KernelEigenCheck {
    /// The kernel vector is the (positive) top eigenvector, as it must be
    /// above the largest zero.
    pub fn kernel_is_top(&self) -> bool {
        self.eigenvalue_gap <= 1e-10 && self.vector_gap <= 1e-8 && self.top.is_positive()
    }
}

pub fn verify_kernel_eigen(spec: &MeasureSpec, basis: BasisId, k: usize, s: f64) -> Result<KernelEigenCheck> {
    let op = build_tk(spec, basis, k, s)?;
    let t = spec.table(basis)?;
    let v = t.eval_upto(k, s);
    let res = residual(&op, s, &v);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = op.norm_inf().max(1.0);
    let top = top_eigenpair(&op)?;
    let mut unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
    normalize_sign(&mut unit);
    let vector_gap = unit.iter().zip(&top.vector).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(KernelEigenCheck {
        residual: res,
        relative_residual: res / (norm * scale),
        above_largest_zero: s > largest_zero(spec, basis, k)?,
        eigenvalue_gap: (top.value - s).abs(),
        vector_gap,
        top,
        operator: op,
    })
}

/// `F(x) = (x - s) m(x) f(x)^2` with `f` the top eigenfunction of `T_k(s)` in
/// `basis` (`m = x + 1` for the plus-minus system, else `1`), certified.
///
/// The independent value attached as `closed_form` is the MRRW closed form for
/// the base system and the kernel-built Levenshtein bound for the adjacent ones.
pub fn spectral_recover_bound(
    spec: &MeasureSpec,
    basis: BasisId,
    k: usize,
    s: f64,
    tol: Tolerances,
) -> Result<BoundResult> {
    let op = build_tk(spec, basis, k, s)?;
    let top = top_eigenpair(&op)?;
    let plus_one = basis == MeasureVariant::PlusMinus;
    let f = BoundPolynomial::factored(spec, Method::Spectral, basis, top.vector, plus_one, s)?;
    let mut r = BoundResult::certified(spec, f, tol)?;
    r.closed_form = match basis {
        MeasureVariant::Base => mrrw_bound_closed(spec, k, s).ok(),
        MeasureVariant::Minus => lev_odd_poly(spec, k, s).ok().map(|g| g.fourier()[0].recip()),
        MeasureVariant::PlusMinus => lev_even_poly(spec, k, s).ok().map(|g| g.fourier()[0].recip()),
    };
    Ok(r)
}

/// Sign of the corner entry in the `s`-independent operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SignVariant {
    /// `J_k + rho_k(1) e_k e_k^T`: the top eigenvalue is exactly 1.
    Additive,
    /// `J_k - rho_k(1) e_k e_k^T`.
    #[default]
    Subtractive,
}

impl SignVariant {
    pub fn sigma(self) -> f64 {
        match self {
            SignVariant::Additive => 1.0,
            SignVariant::Subtractive => -1.0,
        }
    }
}

impl std::str::FromStr for SignVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" | "+" => Ok(SignVariant::Additive),
            "subtractive" | "-" => Ok(SignVariant::Subtractive),
            other => Err(Error::InvalidInput(format!("unknown sign variant {other:?}"))),
        }
    }
}

/// `J_k + sigma rho_k(1) e_k e_k^T` with `rho_k(1) = a_k p_{k+1}(1) / p_k(1)`.
pub fn build_fixed_operator(spec: &MeasureSpec, k: usize, variant: SignVariant) -> Result<JacobiOperator> {
    let t = spec.base_table();
    t.check_degree(k + 1)?;
    let p = t.eval_upto(k + 1, 1.0);
    let rho = variant.sigma() * t.a[k] * p[k + 1] / p[k];
    Ok(JacobiOperator::new(t.b[..=k].to_vec(), t.a[..k].to_vec(), Some(rho), MeasureVariant::Base))
}

/// `4 a_k p_{k+1}(1) p_k(1) / (1 - lambda_k)` for the top eigenvalue of the
/// fixed operator, paired with the certified bound of `(x - lambda) f^2`.
/// Returns the smaller of the two as `bound` and the formula value as
/// `closed_form`; the degree is `2k + 1` and `s` is `lambda_k`.
pub fn spectral_bound_fixed(
    spec: &MeasureSpec,
    k: usize,
    variant: SignVariant,
    tol: Tolerances,
) -> Result<BoundResult> {
    if k == 0 {
        return Err(Error::InvalidInput("the fixed operator needs k >= 1".into()));
    }
    let op = build_fixed_operator(spec, k, variant)?;
    let top = top_eigenpair(&op)?;
    let lambda = top.value;
    let gap = 1.0 - lambda;
    if gap <= 1e-12 {
        return Err(Error::DegenerateDenominator(gap));
    }
    let t = spec.base_table();
    let p = t.eval_upto(k + 1, 1.0);
    let formula = 4.0 * t.a[k] * p[k + 1] * p[k] / gap;
    let f = BoundPolynomial::factored(spec, Method::SpectralFixed, MeasureVariant::Base, top.vector, false, lambda)?;
    let mut r = BoundResult::certified(spec, f, tol)?;
    r.closed_form = Some(formula);
    r.bound = r.bound.min(formula);
    Ok(r)
}

/// Best certified fixed-operator bound over `k = 1..`, if any.
pub fn spectral_bound_fixed_best(spec: &MeasureSpec, variant: SignVariant, tol: Tolerances) -> Result<BoundResult> {
    let kmax = crate::constructions::mrrw_max_k(spec).min(spec.base_table().max_degree().saturating_sub(1));
    let mut best: Option<BoundResult> = None;
    for k in 1..=kmax {
        if let Ok(r) = spectral_bound_fixed(spec, k, variant, tol) {
            if best.as_ref().is_none_or(|b| r.bound < b.bound) {
                best = Some(r);
            }
        }
    }
    best.ok_or_else(|| Error::NoCertifiedBound(format!("no {variant:?} fixed operator certifies")))
}
