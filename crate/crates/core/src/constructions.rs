//! Extremal polynomials for the Delsarte problem and the bounds they certify.
//!
//! Every polynomial here has the shape `c (x - s) m(x) g(x)^2` where `g` is a
//! Christoffel-Darboux kernel (or a Jacobi-operator eigenfunction) in one of the
//! three orthonormal systems and `m` is `1` or `x + 1`. The constant `c` is
//! fixed by `f(1) = 1`, so the bound is always `1 / f̂_0`.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::feasibility::{cone_certificate, fourier_expand, ConeCertificate, Tolerances};
use crate::orthopoly::{largest_zero, RecurrenceCoeffs};
use crate::spaces::{BasisId, MeasureSpec, MeasureVariant, SpaceDescriptor};
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mrrw,
    LevOdd,
    LevEven,
    Spectral,
    SpectralFixed,
    Custom,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Mrrw => "mrrw",
            Method::LevOdd => "lev_odd",
            Method::LevEven => "lev_even",
            Method::Spectral => "spectral",
            Method::SpectralFixed => "spectral_fixed",
            Method::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone)]
enum Form {
    /// `(x - s) [(x + 1)] (sum_i coeffs_i q_i)^2`
    Factored { table: RecurrenceCoeffs, coeffs: Vec<f64>, plus_one: bool },
    /// `sum_i coeffs_i p_i` in the base system
    Series { table: RecurrenceCoeffs, coeffs: Vec<f64> },
}

/// A candidate polynomial for the Delsarte problem, normalized so `f(1) = 1`.
#[derive(Debug, Clone)]
pub struct BoundPolynomial {
    method: Method,
    basis: BasisId,
    k: usize,
    degree: usize,
    s: f64,
    c: f64,
    form: Form,
    fourier: Vec<f64>,
}

fn check_s(s: f64) -> Result<()> {
    if !(-1.0..1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("s = {s} must lie in [-1, 1)")));
    }
    Ok(())
}

impl BoundPolynomial {
    /// `c (x - s) [(x + 1)] g(x)^2` with `g = sum coeffs_i q_i` in `basis`.
    pub fn factored(
        spec: &MeasureSpec,
        method: Method,
        basis: BasisId,
        coeffs: Vec<f64>,
        plus_one: bool,
        s: f64,
    ) -> Result<Self> {
        check_s(s)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty kernel expansion".into()));
        }
        let k = coeffs.len() - 1;
        let table = spec.table(basis)?.truncated(k)?;
        let degree = 2 * k + 1 + usize::from(plus_one);
        let g1 = table.eval_series(&coeffs, 1.0);
        let at_one = (1.0 - s) * if plus_one { 2.0 } else { 1.0 } * g1 * g1;
        if !(at_one > 0.0 && at_one.is_finite()) {
            return Err(Error::Unnormalizable(at_one));
        }
        let mut poly = Self {
            method,
            basis,
            k,
            degree,
            s,
            c: at_one.recip(),
            form: Form::Factored { table, coeffs, plus_one },
            fourier: Vec::new(),
        };
        poly.fourier = fourier_expand(spec, |x| poly.eval(x), degree)?;
        Ok(poly)
    }

    /// A polynomial given by its base-system Fourier coefficients, rescaled so
    /// that `f(1) = 1`. `s` records the distance it is meant to be audited at.
    pub fn from_fourier(spec: &MeasureSpec, method: Method, s: f64, coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        }
        let degree = coeffs.len() - 1;
        let max = spec.max_poly_degree();
        if degree > max {
            return Err(Error::DegreeExceeded { requested: degree, max });
        }
        let table = spec.base_table().truncated(degree)?;
        let at_one = table.eval_series(coeffs, 1.0);
        if !(at_one > 0.0 && at_one.is_finite()) {
            return Err(Error::Unnormalizable(at_one));
        }
        let c = at_one.recip();
        Ok(Self {
            method,
            basis: MeasureVariant::Base,
            k: degree,
            degree,
            s,
            c,
            fourier: coeffs.iter().map(|v| v * c).collect(),
            form: Form::Series { table, coeffs: coeffs.to_vec() },
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn basis(&self) -> BasisId {
        self.basis
    }

    /// Degree of the kernel (or eigenfunction) factor.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn fourier(&self) -> &[f64] {
        &self.fourier
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.form {
            Form::Factored { table, coeffs, plus_one } => {
                let g = table.eval_series(coeffs, x);
                let m = if *plus_one { x + 1.0 } else { 1.0 };
                self.c * (x - self.s) * m * g * g
            }
            Form::Series { table, coeffs } => self.c * table.eval_series(coeffs, x),
        }
    }

    /// `(f(x), f'(x))`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let (table, coeffs) = match &self.form {
            Form::Factored { table, coeffs, .. } | Form::Series { table, coeffs } => (table, coeffs),
        };
        let mut val = vec![0.0; coeffs.len()];
        let mut der = vec![0.0; coeffs.len()];
        table.eval_with_derivative_into(x, &mut val, &mut der);
        let g: f64 = coeffs.iter().zip(&val).map(|(c, p)| c * p).sum();
        let dg: f64 = coeffs.iter().zip(&der).map(|(c, p)| c * p).sum();
        match &self.form {
            Form::Factored { plus_one, .. } => {
                let (m, dm) = if *plus_one { (x + 1.0, 1.0) } else { (1.0, 0.0) };
                let xs = x - self.s;
                let f = self.c * xs * m * g * g;
                let df = self.c * (m * g * g + xs * dm * g * g + 2.0 * xs * m * g * dg);
                (f, df)
            }
            Form::Series { .. } => (self.c * g, self.c * dg),
        }
    }
}

/// `c (x - s) K_k(x, s)^2` over the base system.
pub fn mrrw_poly(spec: &MeasureSpec, k: usize, s: f64) -> Result<BoundPolynomial> {
    kernel_poly(spec, Method::Mrrw, MeasureVariant::Base, k, s, false)
}

/// `c (x - s) K_k^-(x, s)^2` over the system orthonormal for `(1 - x) dmu`.
pub fn lev_odd_poly(spec: &MeasureSpec, k: usize, s: f64) -> Result<BoundPolynomial> {
    kernel_poly(spec, Method::LevOdd, MeasureVariant::Minus, k, s, false)
}

/// `c (x - s)(x + 1) K_k^+-(x, s)^2` over the system orthonormal for
/// `(1 - x^2) dmu`.
pub fn lev_even_poly(spec: &MeasureSpec, k: usize, s: f64) -> Result<BoundPolynomial> {
    kernel_poly(spec, Method::LevEven, MeasureVariant::PlusMinus, k, s, true)
}

fn kernel_poly(
    spec: &MeasureSpec,
    method: Method,
    basis: BasisId,
    k: usize,
    s: f64,
    plus_one: bool,
) -> Result<BoundPolynomial> {
    check_s(s)?;
    let t = spec.table(basis)?;
    t.check_degree(k)?;
    let coeffs = t.eval_upto(k, s);
    BoundPolynomial::factored(spec, method, basis, coeffs, plus_one, s)
}

/// The closed form `-(1 - s) K_k(1, s)^2 / (a_k p_{k+1}(s) p_k(s))`, valid for
/// `x_k < s < x_{k+1}`.
pub fn mrrw_bound_closed(spec: &MeasureSpec, k: usize, s: f64) -> Result<f64> {
    let t = spec.base_table();
    t.check_degree(k + 1)?;
    let lo = largest_zero(spec, MeasureVariant::Base, k)?;
    let hi = largest_zero(spec, MeasureVariant::Base, k + 1)?;
    if !(lo < s && s < hi) {
        return Err(Error::InvalidInput(format!(
            "s = {s} is outside the window ({lo}, {hi}) for k = {k}"
        )));
    }
    let ps = t.eval_upto(k + 1, s);
    let p1 = t.eval_upto(k, 1.0);
    let kernel: f64 = ps[..=k].iter().zip(&p1).map(|(a, b)| a * b).sum();
    let denom = t.a[k] * ps[k + 1] * ps[k];
    if denom == 0.0 {
        return Err(Error::InvalidInput(format!("p_k(s) p_(k+1)(s) vanishes at s = {s}")));
    }
    Ok(-(1.0 - s) * kernel * kernel / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevVariant {
    Odd,
    Even,
}

/// Slack for deciding whether `s` sits on a window endpoint.
pub const WINDOW_TIE: f64 = 1e-12;

/// Range of `s` served by one Levenshtein polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevWindow {
    pub k: usize,
    pub variant: LevVariant,
    pub lo: f64,
    pub hi: f64,
    /// Odd windows are closed, even windows open.
    pub closed: bool,
}

impl LevWindow {
    /// Endpoints computed in floating point are matched within
    /// [`WINDOW_TIE`], so shared endpoints land in the closed (odd) window.
    pub fn contains(&self, s: f64) -> bool {
        if self.closed {
            self.lo - WINDOW_TIE <= s && s <= self.hi + WINDOW_TIE
        } else {
            self.lo + WINDOW_TIE < s && s < self.hi - WINDOW_TIE
        }
    }

    pub fn degree(&self) -> usize {
        match self.variant {
            LevVariant::Odd => 2 * self.k + 1,
            LevVariant::Even => 2 * self.k + 2,
        }
    }
}

/// All Levenshtein windows whose polynomial degree fits the space, in order of
/// increasing `s`: `[x_k^+-, x_{k+1}^-]` for degree `2k+1`, then
/// `(x_{k+1}^-, x_{k+1}^+-)` for degree `2k+2`, with `x_0^+- = -1`.
pub fn lev_windows(spec: &MeasureSpec) -> Result<Vec<LevWindow>> {
    let budget = spec.max_poly_degree();
    let minus_max = spec.max_degree(MeasureVariant::Minus).ok();
    let pm_max = spec.max_degree(MeasureVariant::PlusMinus).ok();
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let odd_ok = 2 * k < budget
            && minus_max.is_some_and(|m| m > k)
            && (k == 0 || pm_max.is_some_and(|m| m >= k));
        if !odd_ok {
            break;
        }
        let lo = largest_zero(spec, MeasureVariant::PlusMinus, k)?;
        let mid = largest_zero(spec, MeasureVariant::Minus, k + 1)?;
        out.push(LevWindow { k, variant: LevVariant::Odd, lo, hi: mid, closed: true });
        let even_ok = 2 * k + 2 <= budget && pm_max.is_some_and(|m| m > k);
        if !even_ok {
            break;
        }
        let hi = largest_zero(spec, MeasureVariant::PlusMinus, k + 1)?;
        out.push(LevWindow { k, variant: LevVariant::Even, lo: mid, hi, closed: false });
        k += 1;
    }
    Ok(out)
}

/// The unique Levenshtein window containing `s`.
pub fn lev_degree_select(spec: &MeasureSpec, s: f64) -> Result<LevWindow> {
    if !(-1.0..1.0).contains(&s) {
        return Err(Error::InvalidInput(format!("s = {s} must lie in [-1, 1)")));
    }
    let windows = lev_windows(spec)?;
    windows.iter().find(|w| w.contains(s)).copied().ok_or_else(|| Error::DegreeBudgetExceeded {
        s,
        limit: windows.last().map_or(-1.0, |w| w.hi),
    })
}

/// `f(1) / f̂_0 = 1 / f̂_0`, refusing polynomials with `f̂_0 <= pos`.
pub fn bound_value(spec: &MeasureSpec, f: &BoundPolynomial, tol: Tolerances) -> Result<f64> {
    let f0 = f.fourier()[0];
    if f0 > tol.pos {
        Ok(f0.recip())
    } else {
        Err(Error::NotInCone(Box::new(cone_certificate(spec, f, f.s(), tol))))
    }
}

/// Runs the cone audit at `f.s()` and returns the bound only on a pass.
pub fn certify(spec: &MeasureSpec, f: &BoundPolynomial, tol: Tolerances) -> Result<(f64, ConeCertificate)> {
    let cert = cone_certificate(spec, f, f.s(), tol);
    if !cert.passed() {
        return Err(Error::NotInCone(Box::new(cert)));
    }
    let value = bound_value(spec, f, tol)?;
    Ok((value, cert))
}

/// Classical bounds reported next to the polynomial ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    pub singleton: f64,
    pub sphere_packing: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plotkin: Option<f64>,
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Singleton, sphere-packing and (when applicable) Plotkin bounds for binary
/// codes of length `n` and minimum distance `d`.
pub fn baselines(n: usize, d: usize) -> Baselines {
    let t = (d - 1) / 2;
    let ball: f64 = (0..=t).map(|i| binomial_f64(n, i)).sum();
    let total = 2f64.powi(n as i32);
    let plotkin = if d.is_multiple_of(2) && 2 * d > n {
        Some(2.0 * (d / (2 * d - n)) as f64)
    } else if d % 2 == 1 && 2 * d + 1 > n {
        Some(2.0 * ((d + 1) / (2 * d + 1 - n)) as f64)
    } else {
        None
    };
    Baselines { singleton: 2f64.powi((n - d + 1) as i32), sphere_packing: total / ball, plotkin }
}

/// Method family requested for a distance-driven bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMethod {
    /// MRRW polynomial, minimized over every certified kernel degree.
    Mrrw,
    /// Levenshtein polynomial of the window containing `s`.
    Lev,
    /// Levenshtein kernel rebuilt as the top eigenfunction of `T_k(s)` in the
    /// adjacent basis.
    Spectral,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::Mrrw => "mrrw",
            BoundMethod::Lev => "lev",
            BoundMethod::Spectral => "spectral",
        })
    }
}

fn space_as_string<S: Serializer>(space: &SpaceDescriptor, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_str(space)
}

/// A certified upper bound on code size.
#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    #[serde(serialize_with = "space_as_string")]
    pub space: SpaceDescriptor,
    pub method: Method,
    pub basis: BasisId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub s: f64,
    pub k: usize,
    pub degree: usize,
    pub bound: f64,
    pub certificate_id: String,
    /// Independent closed-form value where one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baselines: Option<Baselines>,
    #[serde(skip)]
    pub certificate: ConeCertificate,
    #[serde(skip)]
    pub polynomial: BoundPolynomial,
}

impl BoundResult {
    /// Certifies `f` and packages the result; the only way to build one.
    pub fn certified(spec: &MeasureSpec, f: BoundPolynomial, tol: Tolerances) -> Result<Self> {
        let (bound, certificate) = certify(spec, &f, tol)?;
        Ok(Self {
            space: spec.descriptor().clone(),
            method: f.method(),
            basis: f.basis(),
            n: spec.hamming_n(),
            d: None,
            s: f.s(),
            k: f.k(),
            degree: f.degree(),
            bound,
            certificate_id: certificate.id.clone(),
            closed_form: None,
            baselines: None,
            certificate,
            polynomial: f,
        })
    }
}

/// Largest MRRW kernel degree whose polynomial fits the space.
pub fn mrrw_max_k(spec: &MeasureSpec) -> usize {
    let budget = spec.max_poly_degree();
    ((budget.saturating_sub(1)) / 2).min(spec.base_table().max_degree())
}

/// Certified bound for maximal inner product `s` by the requested method.
pub fn bound_for_s(spec: &MeasureSpec, s: f64, method: BoundMethod, tol: Tolerances) -> Result<BoundResult> {
    check_s(s)?;
    match method {
        BoundMethod::Mrrw => {
            let mut best: Option<BoundResult> = None;
            for k in 0..=mrrw_max_k(spec) {
                let Ok(f) = mrrw_poly(spec, k, s) else { continue };
                let Ok(mut r) = BoundResult::certified(spec, f, tol) else { continue };
                if best.as_ref().is_none_or(|b| r.bound < b.bound) {
                    r.closed_form = mrrw_bound_closed(spec, k, s).ok();
                    best = Some(r);
                }
            }
            best.ok_or_else(|| Error::NoCertifiedBound(format!("no MRRW degree certifies s = {s}")))
        }
        BoundMethod::Lev => {
            let w = lev_degree_select(spec, s)?;
            let f = match w.variant {
                LevVariant::Odd => lev_odd_poly(spec, w.k, s)?,
                LevVariant::Even => lev_even_poly(spec, w.k, s)?,
            };
            BoundResult::certified(spec, f, tol)
        }
        BoundMethod::Spectral => {
            let w = lev_degree_select(spec, s)?;
            let basis = match w.variant {
                LevVariant::Odd => MeasureVariant::Minus,
                LevVariant::Even => MeasureVariant::PlusMinus,
            };
            spectral::spectral_recover_bound(spec, basis, w.k, s, tol)
        }
    }
}

/// `s = 1 - 2d/n`.
pub fn distance_to_s(n: usize, d: usize) -> f64 {
    1.0 - 2.0 * d as f64 / n as f64
}

/// Certified bound for binary codes of length `n` and minimum distance `d`.
pub fn bound_for_distance(spec: &MeasureSpec, d: usize, method: BoundMethod, tol: Tolerances) -> Result<BoundResult> {
    let n = spec
        .hamming_n()
        .ok_or_else(|| Error::InvalidInput("distance queries need a Hamming space".into()))?;
    if d == 0 || d > n {
        return Err(Error::InvalidInput(format!("distance d = {d} must satisfy 1 <= d <= n = {n}")));
    }
    let mut r = bound_for_s(spec, distance_to_s(n, d), method, tol)?;
    r.d = Some(d);
    r.baselines = Some(baselines(n, d));
    Ok(r)
}
