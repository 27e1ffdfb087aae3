//! Christoffel-Darboux reproducing kernels `K_k(x, s) = sum_{i<=k} p_i(s) p_i(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{BasisId, MeasureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub basis: BasisId,
    pub k: usize,
    pub s: f64,
}

impl KernelParams {
    pub fn new(basis: BasisId, k: usize, s: f64) -> Self {
        Self { basis, k, s }
    }
}

/// `K_k(x, s)` by direct summation, well defined at `x = s`.
pub fn cd_kernel(spec: &MeasureSpec, params: KernelParams, x: f64) -> Result<f64> {
    let t = spec.table(params.basis)?;
    t.check_degree(params.k)?;
    let ps = t.eval_upto(params.k, params.s);
    let px = t.eval_upto(params.k, x);
    Ok(ps.iter().zip(&px).map(|(a, b)| a * b).sum())
}

/// Both sides of the Christoffel-Darboux identity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdResidual {
    /// `(x - s) K_k(x, s) - a_k (p_{k+1}(x) p_k(s) - p_{k+1}(s) p_k(x))`.
    pub residual: f64,
    /// Sum of the magnitudes of the terms, the floating-point yardstick for
    /// `residual`.
    pub scale: f64,
}

impl CdResidual {
    /// `|residual| / max(1, scale)`.
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale.max(1.0)
    }
}

pub fn cd_identity_residual(spec: &MeasureSpec, params: KernelParams, x: f64) -> Result<CdResidual> {
    let t = spec.table(params.basis)?;
    let k = params.k;
    t.check_degree(k + 1)?;
    let s = params.s;
    let ps = t.eval_upto(k + 1, s);
    let px = t.eval_upto(k + 1, x);
    let kernel: f64 = ps[..=k].iter().zip(&px[..=k]).map(|(a, b)| a * b).sum();
    let lhs = (x - s) * kernel;
    let t1 = t.a[k] * px[k + 1] * ps[k];
    let t2 = t.a[k] * ps[k + 1] * px[k];
    let scale = lhs.abs() + t1.abs() + t2.abs();
    Ok(CdResidual { residual: lhs - (t1 - t2), scale })
}

/// Result of pairing the kernel with a polynomial under the basis measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reproduction {
    pub value: f64,
    /// `sum_j w_j |K_k(x_j, y) f(x_j)|` over the integration points.
    pub scale: f64,
}

/// `<K_k(., y), f>` under the variant measure of `basis`; equals `f(y)` when
/// `deg f <= k`.
pub fn reproduce<F: Fn(f64) -> f64>(
    spec: &MeasureSpec,
    basis: BasisId,
    k: usize,
    y: f64,
    f: F,
    f_degree: usize,
) -> Result<Reproduction> {
    if f_degree > k {
        return Err(Error::InvalidInput(format!(
            "reproducing property needs deg f = {f_degree} <= k = {k}"
        )));
    }
    let t = spec.table(basis)?;
    t.check_degree(k)?;
    let py = t.eval_upto(k, y);
    let mut buf = vec![0.0; k + 1];
    let (nodes, weights) = spec.weighted_points(basis);
    // only needed to reject continuous integrands above the rule's exactness
    spec.moment(basis, |_| 0.0, 2 * k)?;
    let mut value = 0.0;
    let mut scale = 0.0;
    for (&x, &w) in nodes.iter().zip(&weights) {
        t.eval_into(x, &mut buf);
        let kern: f64 = py.iter().zip(&buf).map(|(a, b)| a * b).sum();
        let term = w * kern * f(x);
        value += term;
        scale += term.abs();
    }
    Ok(Reproduction { value, scale })
}
