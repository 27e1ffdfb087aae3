//! Measure spaces on [-1, 1]: binary Hamming, unit sphere, and user-supplied
//! recurrences, together with their moment functionals and Gauss rules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::{self, RecurrenceCoeffs};
use crate::tridiag;

/// Polynomial degree tabulated for continuous spaces unless overridden.
pub const DEFAULT_SPHERE_DEGREE: usize = 96;

/// Extra Gauss nodes kept beyond the tabulated degree so that every product
/// needed by the adjacent-system recurrences is integrated exactly.
const RULE_MARGIN: usize = 4;

/// Which of the three related measures an operation works against.
///
/// `Minus` is `(1 - x) dmu` and `PlusMinus` is `(1 - x^2) dmu`. Neither is
/// renormalized, so their total mass is `F(1 - x)` resp. `F(1 - x^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureVariant {
    Base,
    Minus,
    PlusMinus,
}

impl MeasureVariant {
    pub const ALL: [MeasureVariant; 3] =
        [MeasureVariant::Base, MeasureVariant::Minus, MeasureVariant::PlusMinus];

    /// Density of the variant relative to the base measure.
    #[inline]
    pub fn multiplier(self, x: f64) -> f64 {
        match self {
            MeasureVariant::Base => 1.0,
            MeasureVariant::Minus => 1.0 - x,
            MeasureVariant::PlusMinus => (1.0 - x) * (1.0 + x),
        }
    }

    /// Degree of [`multiplier`](Self::multiplier).
    pub fn extra_degree(self) -> usize {
        match self {
            MeasureVariant::Base => 0,
            MeasureVariant::Minus => 1,
            MeasureVariant::PlusMinus => 2,
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for MeasureVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureVariant::Base => "base",
            MeasureVariant::Minus => "minus",
            MeasureVariant::PlusMinus => "plusminus",
        })
    }
}

/// The orthonormal system `{p_i}`, `{p_i^-}` or `{p_i^+-}` is identified by the
/// measure it is orthonormal against.
pub type BasisId = MeasureVariant;

/// Serializable description of a space, sufficient to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum SpaceDescriptor {
    Hamming {
        n: usize,
    },
    Sphere {
        d: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_degree: Option<usize>,
    },
    Custom {
        a: Vec<f64>,
        b: Vec<f64>,
    },
}

impl SpaceDescriptor {
    pub fn build(&self) -> Result<MeasureSpec> {
        match self {
            SpaceDescriptor::Hamming { n } => hamming_space(*n),
            SpaceDescriptor::Sphere { d, max_degree } => {
                sphere_space_with_degree(*d, max_degree.unwrap_or(DEFAULT_SPHERE_DEGREE))
            }
            SpaceDescriptor::Custom { a, b } => custom_space(a.clone(), b.clone()),
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDescriptor::Hamming { n } => write!(f, "hamming:{n}"),
            SpaceDescriptor::Sphere { d, .. } => write!(f, "sphere:{d}"),
            SpaceDescriptor::Custom { b, .. } => write!(f, "custom:{}", b.len()),
        }
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;

    /// Parses `hamming:<n>` or `sphere:<d>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("space `{s}` is not of the form kind:param")))?;
        let value: usize = param
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("space parameter `{param}` is not an integer")))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "hamming" => Ok(SpaceDescriptor::Hamming { n: value }),
            "sphere" => Ok(SpaceDescriptor::Sphere { d: value, max_degree: None }),
            other => Err(Error::InvalidInput(format!("unknown space kind `{other}`"))),
        }
    }
}

/// Discrete support, or an internal Gauss rule standing in for a continuous
/// density.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Discrete { nodes: Vec<f64>, weights: Vec<f64> },
    Continuous { rule_nodes: Vec<f64>, rule_weights: Vec<f64> },
}

impl Support {
    fn points(&self) -> (&[f64], &[f64]) {
        match self {
            Support::Discrete { nodes, weights } => (nodes, weights),
            Support::Continuous { rule_nodes, rule_weights } => (rule_nodes, rule_weights),
        }
    }
}

/// A normalized measure on [-1, 1] with the recurrence tables of its base and
/// adjacent orthonormal systems.
#[derive(Debug, Clone)]
pub struct MeasureSpec {
    descriptor: SpaceDescriptor,
    support: Support,
    tables: [Option<RecurrenceCoeffs>; 3],
}

impl MeasureSpec {
    pub fn descriptor(&self) -> &SpaceDescriptor {
        &self.descriptor
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.support, Support::Discrete { .. })
    }

    /// `n` for the Hamming space, `None` otherwise.
    pub fn hamming_n(&self) -> Option<usize> {
        match self.descriptor {
            SpaceDescriptor::Hamming { n } => Some(n),
            _ => None,
        }
    }

    /// Recurrence table of `basis`; fails when the variant measure has no mass
    /// (the adjacent systems of Hamming spaces with `n <= 2`).
    pub fn table(&self, basis: BasisId) -> Result<&RecurrenceCoeffs> {
        self.tables[basis.index()]
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("the {basis} measure of {} is empty", self.descriptor)))
    }

    pub fn base_table(&self) -> &RecurrenceCoeffs {
        self.tables[0].as_ref().expect("base table always present")
    }

    pub fn max_degree(&self, basis: BasisId) -> Result<usize> {
        Ok(self.table(basis)?.max_degree())
    }

    /// Largest polynomial degree whose Fourier coefficients this space resolves.
    /// For a discrete space this is one less than the number of nodes.
    pub fn max_poly_degree(&self) -> usize {
        match &self.support {
            Support::Discrete { nodes, .. } => nodes.len() - 1,
            Support::Continuous { .. } => self.base_table().max_degree(),
        }
    }

    /// Nodes and weights of the (possibly internal) discrete representation,
    /// already multiplied by the variant density.
    pub fn weighted_points(&self, variant: MeasureVariant) -> (Vec<f64>, Vec<f64>) {
        let (nodes, weights) = self.support.points();
        let mut xs = Vec::with_capacity(nodes.len());
        let mut ws = Vec::with_capacity(nodes.len());
        for (&x, &w) in nodes.iter().zip(weights) {
            let wv = w * variant.multiplier(x);
            if wv > 0.0 {
                xs.push(x);
                ws.push(wv);
            }
        }
        (xs, ws)
    }

    /// Integrates `f` against the variant measure. `degree` bounds the degree of
    /// `f`; for continuous spaces it must fit the exactness of the internal rule.
    pub fn moment<F: Fn(f64) -> f64>(&self, variant: MeasureVariant, f: F, degree: usize) -> Result<f64> {
        if let Support::Continuous { rule_nodes, .. } = &self.support {
            let exact = 2 * rule_nodes.len() - 1;
            let needed = degree + variant.extra_degree();
            if needed > exact {
                return Err(Error::DegreeExceeded { requested: needed, max: exact });
            }
        }
        let (nodes, weights) = self.support.points();
        let mut acc = 0.0;
        for (&x, &w) in nodes.iter().zip(weights) {
            acc += w * variant.multiplier(x) * f(x);
        }
        if !acc.is_finite() {
            return Err(Error::Overflow(format!("moment functional evaluated to {acc}")));
        }
        Ok(acc)
    }

    /// JSON-friendly view: `{kind, params, nodes?, weights?}`.
    pub fn to_record(&self) -> SpaceRecord {
        let (nodes, weights) = match &self.support {
            Support::Discrete { nodes, weights } => (Some(nodes.clone()), Some(weights.clone())),
            Support::Continuous { .. } => (None, None),
        };
        SpaceRecord { descriptor: self.descriptor.clone(), nodes, weights }
    }
}

/// Serialized form of a [`MeasureSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceRecord {
    #[serde(flatten)]
    pub descriptor: SpaceDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

fn binomial_weights(n: usize) -> Vec<f64> {
    let ln2n = n as f64 * std::f64::consts::LN_2;
    let mut ln_c = 0.0;
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j > 0 {
            ln_c += ((n - j + 1) as f64).ln() - (j as f64).ln();
        }
        out.push((ln_c - ln2n).exp());
    }
    out
}

fn build_tables(
    base: RecurrenceCoeffs,
    support: &Support,
    adjacent_cap: Option<(usize, usize)>,
) -> Result<[Option<RecurrenceCoeffs>; 3]> {
    let (nodes, weights) = support.points();
    let mut adjacent = Vec::with_capacity(2);
    for (variant, cap) in [
        (MeasureVariant::Minus, adjacent_cap.map(|c| c.0)),
        (MeasureVariant::PlusMinus, adjacent_cap.map(|c| c.1)),
    ] {
        let (xs, ws): (Vec<f64>, Vec<f64>) = nodes
            .iter()
            .zip(weights)
            .map(|(&x, &w)| (x, w * variant.multiplier(x)))
            .filter(|&(_, w)| w > 0.0)
            .unzip();
        if xs.is_empty() {
            adjacent.push(None);
            continue;
        }
        let top = cap.unwrap_or(xs.len() - 1).min(xs.len() - 1);
        adjacent.push(Some(orthopoly::stieltjes(&xs, &ws, top)?));
    }
    let plusminus = adjacent.pop().expect("two adjacent tables");
    let minus = adjacent.pop().expect("two adjacent tables");
    Ok([Some(base), minus, plusminus])
}

/// Binary Hamming space of length `n`: nodes `1 - 2j/n`, weights `C(n,j)/2^n`.
pub fn hamming_space(n: usize) -> Result<MeasureSpec> {
    if n == 0 {
        return Err(Error::InvalidInput("Hamming space needs n >= 1".into()));
    }
    let nodes: Vec<f64> = (0..=n).map(|j| 1.0 - 2.0 * j as f64 / n as f64).collect();
    let weights = binomial_weights(n);
    let nf = n as f64;
    let a = (0..n).map(|i| ((n - i) as f64 * (i + 1) as f64).sqrt() / nf).collect();
    let base = RecurrenceCoeffs::new(a, vec![0.0; n + 1], 1.0)?;
    let support = Support::Discrete { nodes, weights };
    // The adjacent measures lose the node x = 1 (resp. both endpoints).
    let tables = build_tables(base, &support, None)?;
    Ok(MeasureSpec { descriptor: SpaceDescriptor::Hamming { n }, support, tables })
}

/// Orthonormal recurrence of the sphere's measure `c (1 - x^2)^((d-3)/2) dx`.
///
/// With `lambda = (d - 2)/2` these are the normalized Gegenbauer coefficients
/// `a_i^2 = (i+1)(i+d-2) / ((2i+d)(2i+d-2))`, so that `a_0^2 = 1/d = F(x^2)`.
pub fn gegenbauer_a(d: usize, i: usize) -> f64 {
    let (d, i) = (d as f64, i as f64);
    ((i + 1.0) * (i + d - 2.0) / ((2.0 * i + d) * (2.0 * i + d - 2.0))).sqrt()
}

/// Unit sphere `S^{d-1}` in `R^d` with the default tabulated degree.
pub fn sphere_space(d: usize) -> Result<MeasureSpec> {
    sphere_space_with_degree(d, DEFAULT_SPHERE_DEGREE)
}

pub fn sphere_space_with_degree(d: usize, max_degree: usize) -> Result<MeasureSpec> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("sphere dimension d = {d} must be at least 3")));
    }
    if max_degree < 2 {
        return Err(Error::InvalidInput("sphere tables need max_degree >= 2".into()));
    }
    let rule_len = max_degree + RULE_MARGIN;
    let a_rule: Vec<f64> = (0..rule_len - 1).map(|i| gegenbauer_a(d, i)).collect();
    let rule = RecurrenceCoeffs::new(a_rule, vec![0.0; rule_len], 1.0)?;
    let (rule_nodes, rule_weights) = golub_welsch(&rule, rule_len)?;
    let base = rule.truncated(max_degree)?;
    let support = Support::Continuous { rule_nodes, rule_weights };
    let tables = build_tables(base, &support, Some((max_degree, max_degree)))?;
    Ok(MeasureSpec {
        descriptor: SpaceDescriptor::Sphere { d, max_degree: Some(max_degree) },
        support,
        tables,
    })
}

/// Space defined by a user recurrence `a_0..a_{m-1}`, `b_0..b_m` of a
/// normalized measure. The measure is represented by its `(m+1)`-point Gauss
/// rule, which reproduces every quantity of degree at most `2m+1`.
pub fn custom_space(a: Vec<f64>, b: Vec<f64>) -> Result<MeasureSpec> {
    if b.is_empty() || a.len() + 1 != b.len() {
        return Err(Error::InvalidInput(format!(
            "custom recurrence needs len(b) = len(a) + 1, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let m = a.len();
    let base = RecurrenceCoeffs::new(a.clone(), b.clone(), 1.0)?;
    let (nodes, weights) = golub_welsch(&base, m + 1)?;
    if nodes.iter().any(|x| !(-1.0 - 1e-12..=1.0 + 1e-12).contains(x)) {
        return Err(Error::InvalidInput(
            "custom recurrence has Gauss nodes outside [-1, 1]".into(),
        ));
    }
    let nodes: Vec<f64> = nodes.into_iter().map(|x| x.clamp(-1.0, 1.0)).collect();
    let support = Support::Discrete { nodes, weights };
    let cap = (m.saturating_sub(1), m.saturating_sub(2));
    let tables = build_tables(base, &support, Some(cap))?;
    Ok(MeasureSpec { descriptor: SpaceDescriptor::Custom { a, b }, support, tables })
}

fn golub_welsch(table: &RecurrenceCoeffs, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let diag = &table.b[..m];
    let off = &table.a[..m - 1];
    let pairs = tridiag::eigenpairs(diag, off)?;
    Ok(pairs.into_iter().map(|(x, v)| (x, table.mass * v[0] * v[0])).unzip())
}

/// Integrates `f` against the variant measure, exactly for polynomials of
/// degree at most `degree`.
pub fn moment_functional<F: Fn(f64) -> f64>(
    spec: &MeasureSpec,
    variant: MeasureVariant,
    f: F,
    degree: usize,
) -> Result<f64> {
    spec.moment(variant, f, degree)
}

/// `m`-point Gauss rule of the variant measure (nodes ascending), built from
/// the variant's own truncated Jacobi matrix. Exact to degree `2m - 1`.
pub fn quadrature(spec: &MeasureSpec, variant: MeasureVariant, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidInput("quadrature needs at least one node".into()));
    }
    let table = spec.table(variant)?;
    if m - 1 > table.max_degree() {
        return Err(Error::DegreeExceeded { requested: m - 1, max: table.max_degree() });
    }
    golub_welsch(table, m)
}
