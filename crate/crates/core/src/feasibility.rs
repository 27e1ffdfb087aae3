//! Membership in the Delsarte cone: nonnegative Fourier coefficients in the base
//! orthonormal system and nonpositivity on `[-1, s]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constructions::BoundPolynomial;
use crate::error::{Error, Result};
use crate::spaces::{MeasureSpec, MeasureVariant, Support};

/// Uniform grid size of the sign audit on `[-1, s]`.
pub const AUDIT_GRID: usize = 2048;

const ROOT_BISECTIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `f_i >= -coeff` counts as nonnegative for `i >= 1`.
    pub coeff: f64,
    /// `f_0 > pos` is required.
    pub pos: f64,
    /// `f(x) <= sign` on the audit set.
    pub sign: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { coeff: 1e-9, pos: 1e-12, sign: 1e-9 }
    }
}

impl Tolerances {
    /// Applies overrides of the form `coeff=1e-8,pos=1e-12,sign=1e-9`; any
    /// subset of keys may be given.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("tolerance override `{item}` is not key=value")))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("tolerance `{value}` is not a number")))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("tolerance {key}={v} must be positive")));
            }
            match key.trim() {
                "coeff" => self.coeff = v,
                "pos" => self.pos = v,
                "sign" => self.sign = v,
                other => return Err(Error::InvalidInput(format!("unknown tolerance key `{other}`"))),
            }
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailReason {
    ConstantTermNotPositive { value: f64 },
    NegativeCoefficient { index: usize, value: f64 },
    PositiveOnInterval { x: f64, value: f64 },
    DistanceOutOfRange { s: f64 },
    NonFinite,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FailReason::ConstantTermNotPositive { value } => {
                if value.abs() <= 1e-9 {
                    write!(f, "f̂_0 = 0 (computed {value:e})")
                } else {
                    write!(f, "f̂_0 = {value:e} is negative")
                }
            }
            FailReason::NegativeCoefficient { index, value } => {
                write!(f, "f̂_{index} = {value:e} is negative")
            }
            FailReason::PositiveOnInterval { x, value } => {
                write!(f, "sign condition violated: f({x}) = {value:e} > 0 on [-1, s]")
            }
            FailReason::DistanceOutOfRange { s } => write!(f, "s = {s} is outside [-1, 1)"),
            FailReason::NonFinite => f.write_str("non-finite coefficient or value"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { reason: FailReason, message: String },
}

/// Audit record of a cone-membership decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeCertificate {
    pub id: String,
    pub s: f64,
    pub fourier: Vec<f64>,
    /// Smallest coefficient among `i >= 1`, if the expansion has any.
    pub min_coeff: Option<(usize, f64)>,
    /// Largest value of `f` over the audit set and where it is attained.
    pub max_on_interval: f64,
    pub argmax: f64,
    pub audit_points: usize,
    pub tolerances: Tolerances,
    pub verdict: Verdict,
}

impl ConeCertificate {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass)
    }

    pub fn reason(&self) -> String {
        match &self.verdict {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail { message, .. } => message.clone(),
        }
    }

    pub fn fail_reason(&self) -> Option<&FailReason> {
        match &self.verdict {
            Verdict::Pass => None,
            Verdict::Fail { reason, .. } => Some(reason),
        }
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.s.to_bits().to_le_bytes());
        for c in &self.fourier {
            h.update(c.to_bits().to_le_bytes());
        }
        for t in [self.tolerances.coeff, self.tolerances.pos, self.tolerances.sign] {
            h.update(t.to_bits().to_le_bytes());
        }
        h.update(self.max_on_interval.to_bits().to_le_bytes());
        h.update(self.reason().as_bytes());
        let out = h.finalize();
        out.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Coefficients `f̂_i = <f, p_i>`, `i = 0..=n`, in the base orthonormal system.
pub fn fourier_expand<F: Fn(f64) -> f64>(spec: &MeasureSpec, f: F, n: usize) -> Result<Vec<f64>> {
    let max = spec.max_poly_degree();
    if n > max {
        return Err(Error::DegreeExceeded { requested: n, max });
    }
    // validates quadrature exactness for continuous spaces
    spec.moment(MeasureVariant::Base, |_| 0.0, 2 * n)?;
    let t = spec.base_table();
    let (nodes, weights) = spec.weighted_points(MeasureVariant::Base);
    let mut out = vec![0.0; n + 1];
    let mut buf = vec![0.0; n + 1];
    for (&x, &w) in nodes.iter().zip(&weights) {
        let fx = w * f(x);
        if fx == 0.0 {
            continue;
        }
        t.eval_into(x, &mut buf);
        for (o, p) in out.iter_mut().zip(&buf) {
            *o += fx * p;
        }
    }
    if out.iter().any(|c| !c.is_finite()) {
        return Err(Error::Overflow("non-finite Fourier coefficient".into()));
    }
    Ok(out)
}

fn audit_sign(spec: &MeasureSpec, f: &BoundPolynomial, s: f64) -> (f64, f64, usize) {
    let mut best = (f64::NEG_INFINITY, -1.0);
    let mut count = 0;
    let mut visit = |x: f64, v: f64| {
        count += 1;
        if v > best.0 || v.is_nan() {
            best = (v, x);
        }
    };
    if let Support::Discrete { nodes, .. } = spec.support() {
        for &x in nodes.iter().filter(|&&x| x <= s) {
            visit(x, f.eval(x));
        }
    }
    let steps = AUDIT_GRID - 1;
    let width = s + 1.0;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=steps {
        let x = if i == steps { s } else { -1.0 + width * i as f64 / steps as f64 };
        let (v, dv) = f.eval_with_derivative(x);
        visit(x, v);
        if let Some((x0, d0)) = prev {
            if d0 * dv < 0.0 {
                let (mut lo, mut hi, mut dlo) = (x0, x, d0);
                for _ in 0..ROOT_BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    let (_, dm) = f.eval_with_derivative(mid);
                    if dm * dlo > 0.0 {
                        lo = mid;
                        dlo = dm;
                    } else {
                        hi = mid;
                    }
                }
                let root = 0.5 * (lo + hi);
                visit(root, f.eval(root));
            }
        }
        prev = Some((x, dv));
        if width == 0.0 {
            break;
        }
    }
    (best.0, best.1, count)
}

/// Decides whether `f` lies in the cone for maximal inner product `s`.
///
/// Conditions are checked in the order `f̂_0 > pos`, `f̂_i >= -coeff`,
/// `max f <= sign` on the audit set; the first violation is reported. The audit
/// set is every node in `[-1, s]` (discrete spaces), a uniform grid of
/// [`AUDIT_GRID`] points, and every critical point of `f` bracketed on that grid.
pub fn cone_certificate(spec: &MeasureSpec, f: &BoundPolynomial, s: f64, tol: Tolerances) -> ConeCertificate {
    let fourier = f.fourier().to_vec();
    let min_coeff = fourier
        .iter()
        .enumerate()
        .skip(1)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, &v)| (i, v));
    let (max_on_interval, argmax, audit_points) = if (-1.0..1.0).contains(&s) {
        audit_sign(spec, f, s)
    } else {
        (f64::NAN, f64::NAN, 0)
    };

    let reason = if !(-1.0..1.0).contains(&s) {
        Some(FailReason::DistanceOutOfRange { s })
    } else if fourier.iter().any(|c| !c.is_finite()) || !max_on_interval.is_finite() {
        Some(FailReason::NonFinite)
    } else if fourier[0] <= tol.pos {
        Some(FailReason::ConstantTermNotPositive { value: fourier[0] })
    } else if let Some((index, value)) = min_coeff.filter(|&(_, v)| v < -tol.coeff) {
        Some(FailReason::NegativeCoefficient { index, value })
    } else if max_on_interval > tol.sign {
        Some(FailReason::PositiveOnInterval { x: argmax, value: max_on_interval })
    } else {
        None
    };
    let verdict = match reason {
        None => Verdict::Pass,
        Some(reason) => Verdict::Fail { message: reason.to_string(), reason },
    };
    let mut cert = ConeCertificate {
        id: String::new(),
        s,
        fourier,
        min_coeff,
        max_on_interval,
        argmax,
        audit_points,
        tolerances: tol,
        verdict,
    };
    cert.id = cert.digest();
    cert
}
