//! The Delsarte linear program for binary codes, solved exactly (rational
//! arithmetic) or in floating point by a dense Bland-rule simplex.
//!
//! Primal: maximize `1 + sum_{j>=d} B_j` over `B_j >= 0` subject to
//! `sum_j K_i(j) B_j >= -K_i(0)` for `i = 1..n`.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_LP_N: usize = 14;
pub const PIVOT_CAP: usize = 10_000;

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial_int(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `K_i(j) = sum_t (-1)^t C(j, t) C(n - j, i - t)`.
pub fn krawtchouk_int(n: usize, i: usize, j: usize) -> i128 {
    let (n, i, j) = (n as i64, i as i64, j as i64);
    (0..=i)
        .map(|t| {
            let term = binomial_int(j, t) * binomial_int(n - j, i - t);
            if t % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LpMode {
    #[default]
    Float,
    Exact,
}

impl std::str::FromStr for LpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "float" => Ok(LpMode::Float),
            "exact" => Ok(LpMode::Exact),
            other => Err(Error::InvalidInput(format!("unknown LP mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub n: usize,
    pub d: usize,
    pub mode: LpMode,
    pub status: LpStatus,
    pub value: f64,
    /// The optimum as `p/q`, in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// `B_0 = 1, B_1, ..., B_n`.
    #[serde(rename = "B")]
    pub distribution: Vec<f64>,
    #[serde(skip)]
    pub exact_distribution: Option<Vec<BigRational>>,
}

trait Scalar: Clone + fmt::Debug {
    fn from_i128(v: i128) -> Self;
    fn zero_val() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn lt(&self, o: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

const FLOAT_EPS: f64 = 1e-11;

impl Scalar for f64 {
    fn from_i128(v: i128) -> Self {
        v as f64
    }
    fn zero_val() -> Self {
        0.0
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_EPS
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn lt(&self, o: &Self) -> bool {
        *self < *o - FLOAT_EPS * o.abs().max(1.0)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_i128(v: i128) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn zero_val() -> Self {
        Zero::zero()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

enum Outcome<T> {
    Optimal { value: T, x: Vec<T> },
    Unbounded,
}

/// Maximize `c^T x` subject to `A x <= b`, `x >= 0`, with `b >= 0` so the slack
/// basis is feasible. Bland's rule: lowest-index entering column, ties in the
/// ratio test broken by lowest basic variable index.
fn simplex<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> Result<Outcome<T>> {
    let m = a.len();
    let nv = c.len();
    let width = nv + m;
    let mut tab: Vec<Vec<T>> = (0..m)
        .map(|r| {
            let mut row = a[r].clone();
            row.extend((0..m).map(|s| T::from_i128(i128::from(s == r))));
            row.push(b[r].clone());
            row
        })
        .collect();
    // reduced costs c_j - z_j, objective value in the last slot
    let mut obj: Vec<T> = c.to_vec();
    obj.extend((0..=m).map(|_| T::zero_val()));
    let mut basis: Vec<usize> = (nv..width).collect();

    for _ in 0..PIVOT_CAP {
        let Some(enter) = (0..width).find(|&j| obj[j].is_pos()) else {
            let mut x = vec![T::zero_val(); nv];
            for (r, &bv) in basis.iter().enumerate() {
                if bv < nv {
                    x[bv] = tab[r][width].clone();
                }
            }
            let value = T::zero_val().sub(&obj[width]);
            return Ok(Outcome::Optimal { value, x });
        };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..m {
            if !tab[r][enter].is_pos() {
                continue;
            }
            let ratio = tab[r][width].div(&tab[r][enter]);
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio.lt(best) || (!best.lt(&ratio) && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            return Ok(Outcome::Unbounded);
        };
        let piv = tab[pr][enter].clone();
        for v in tab[pr].iter_mut() {
            *v = v.div(&piv);
        }
        let pivot_row = tab[pr].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r == pr {
                continue;
            }
            let f = row[enter].clone();
            if f.is_pos() || f.is_neg() {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = v.sub(&f.mul(p));
                }
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&pivot_row) {
            *v = v.sub(&f.mul(p));
        }
        basis[pr] = enter;
    }
    Err(Error::IterationCap(PIVOT_CAP))
}

fn lp_data<T: Scalar>(n: usize, d: usize) -> (Vec<Vec<T>>, Vec<T>, Vec<T>) {
    let cols: Vec<usize> = (d..=n).collect();
    let a = (1..=n)
        .map(|i| cols.iter().map(|&j| T::from_i128(-krawtchouk_int(n, i, j))).collect())
        .collect();
    let b = (1..=n).map(|i| T::from_i128(binomial_int(n as i64, i as i64))).collect();
    let c = cols.iter().map(|_| T::from_i128(1)).collect();
    (a, b, c)
}

/// Optimum of the Delsarte LP for length `n <= 14` and minimum distance `d`.
pub fn delsarte_lp(n: usize, d: usize, mode: LpMode) -> Result<LpSolution> {
    if n == 0 || n > MAX_LP_N {
        return Err(Error::InvalidInput(format!("LP oracle needs 1 <= n <= {MAX_LP_N}, got n = {n}")));
    }
    if d == 0 || d > n {
        return Err(Error::InvalidInput(format!("distance d = {d} must satisfy 1 <= d <= n = {n}")));
    }
    let unbounded = |mode| LpSolution {
        n,
        d,
        mode,
        status: LpStatus::Unbounded,
        value: f64::INFINITY,
        exact: None,
        distribution: Vec::new(),
        exact_distribution: None,
    };
    let mut distribution = vec![0.0; n + 1];
    distribution[0] = 1.0;
    match mode {
        LpMode::Float => {
            let (a, b, c) = lp_data::<f64>(n, d);
            match simplex(&a, &b, &c)? {
                Outcome::Unbounded => Ok(unbounded(mode)),
                Outcome::Optimal { value, x } => {
                    for (off, v) in x.into_iter().enumerate() {
                        distribution[d + off] = v;
                    }
                    Ok(LpSolution {
                        n,
                        d,
                        mode,
                        status: LpStatus::Optimal,
                        value: 1.0 + value,
                        exact: None,
                        distribution,
                        exact_distribution: None,
                    })
                }
            }
        }
        LpMode::Exact => {
            let (a, b, c) = lp_data::<BigRational>(n, d);
            match simplex(&a, &b, &c)? {
                Outcome::Unbounded => Ok(unbounded(mode)),
                Outcome::Optimal { value, x } => {
                    let total = value + BigRational::one();
                    let mut exact = vec![BigRational::zero(); n + 1];
                    exact[0] = BigRational::one();
                    for (off, v) in x.into_iter().enumerate() {
                        exact[d + off] = v;
                    }
                    let distribution = exact.iter().map(Scalar::to_f64).collect();
                    Ok(LpSolution {
                        n,
                        d,
                        mode,
                        status: LpStatus::Optimal,
                        value: Scalar::to_f64(&total),
                        exact: Some(total.to_string()),
                        distribution,
                        exact_distribution: Some(exact),
                    })
                }
            }
        }
    }
}

/// Largest violation of `sum_j K_i(j) B_j >= 0` (including `j = 0`) over
/// `i = 1..n`; zero when feasible.
pub fn constraint_violation(n: usize, distribution: &[f64]) -> f64 {
    (1..=n)
        .map(|i| {
            let s: f64 = distribution.iter().enumerate().map(|(j, b)| krawtchouk_int(n, i, j) as f64 * b).sum();
            (-s).max(0.0)
        })
        .fold(0.0, f64::max)
}

/// A binary code given by its codewords packed into the low `n` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    pub name: String,
    pub n: usize,
    pub words: Vec<u64>,
}

impl Code {
    pub fn size(&self) -> usize {
        self.words.len()
    }

    /// Minimum pairwise Hamming distance; `n + 1` for codes of size below two.
    pub fn min_distance(&self) -> usize {
        let mut best = self.n + 1;
        for (i, a) in self.words.iter().enumerate() {
            for b in &self.words[i + 1..] {
                best = best.min((a ^ b).count_ones() as usize);
            }
        }
        best
    }
}

pub fn repetition_code(n: usize) -> Code {
    Code { name: format!("repetition({n})"), n, words: vec![0, (1u64 << n) - 1] }
}

pub fn even_weight_code(n: usize) -> Code {
    let words = (0..1u64 << n).filter(|w| w.count_ones() % 2 == 0).collect();
    Code { name: format!("even-weight({n})"), n, words }
}

pub fn full_space_code(n: usize) -> Code {
    Code { name: format!("universe({n})"), n, words: (0..1u64 << n).collect() }
}

/// The 16 codewords of the `[7, 4, 3]` Hamming code, spanned by the rows of a
/// systematic generator matrix.
pub fn hamming_7_4() -> Code {
    const GEN: [u64; 4] = [0b1000_110, 0b0100_101, 0b0010_011, 0b0001_111];
    let words = (0..16u64)
        .map(|m| (0..4).filter(|b| m >> b & 1 == 1).fold(0, |acc, b| acc ^ GEN[b]))
        .collect();
    Code { name: "hamming(7,4)".into(), n: 7, words }
}

/// Explicit codes of length `n`.
pub fn code_zoo(n: usize) -> Vec<Code> {
    let mut out = vec![full_space_code(n)];
    if n >= 2 {
        out.push(repetition_code(n));
        out.push(even_weight_code(n));
    }
    if n == 7 {
        out.push(hamming_7_4());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn krawtchouk_small_values() {
        // K_1(j) = n - 2j, K_2(j) = ((n - 2j)^2 - n) / 2
        for n in 1..12 {
            for j in 0..=n {
                let (ni, ji) = (n as i128, j as i128);
                assert_eq!(krawtchouk_int(n, 0, j), 1);
                assert_eq!(krawtchouk_int(n, 1, j), ni - 2 * ji);
                if n >= 2 {
                    assert_eq!(krawtchouk_int(n, 2, j), ((ni - 2 * ji).pow(2) - ni) / 2);
                }
                assert_eq!(krawtchouk_int(n, j, 0), binomial_int(n as i64, j as i64));
            }
        }
    }

    #[test]
    fn krawtchouk_orthogonality() {
        let n = 9;
        for i in 0..=n {
            for l in 0..=n {
                let s: i128 = (0..=n)
                    .map(|j| binomial_int(n as i64, j as i64) * krawtchouk_int(n, i, j) * krawtchouk_int(n, l, j))
                    .sum();
                let expect = if i == l { (1i128 << n) * binomial_int(n as i64, i as i64) } else { 0 };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn small_instances() {
        for mode in [LpMode::Float, LpMode::Exact] {
            assert!((delsarte_lp(3, 2, mode).unwrap().value - 4.0).abs() < 1e-9);
            assert!((delsarte_lp(3, 3, mode).unwrap().value - 2.0).abs() < 1e-9);
            for n in 1..=8 {
                let sol = delsarte_lp(n, 1, mode).unwrap();
                assert!((sol.value - 2f64.powi(n as i32)).abs() < 1e-9);
            }
        }
        assert_eq!(delsarte_lp(3, 2, LpMode::Exact).unwrap().exact.as_deref(), Some("4"));
    }

    #[test]
    fn hamming_code_parameters() {
        assert!((delsarte_lp(7, 3, LpMode::Exact).unwrap().value - 16.0).abs() < 1e-12);
        let c = hamming_7_4();
        assert_eq!(c.size(), 16);
        assert_eq!(c.min_distance(), 3);
    }

    #[test]
    fn solutions_are_feasible_and_zero_below_d() {
        for n in 2..=10 {
            for d in 1..=n {
                let sol = delsarte_lp(n, d, LpMode::Float).unwrap();
                assert_eq!(sol.status, LpStatus::Optimal);
                assert!(sol.distribution[1..d].iter().all(|&b| b == 0.0));
                assert!(sol.distribution.iter().all(|&b| b >= -1e-9));
                assert!(constraint_violation(n, &sol.distribution) <= 1e-9 * sol.value);
                let total: f64 = sol.distribution.iter().sum();
                assert!((total - sol.value).abs() < 1e-9 * sol.value);
            }
        }
    }

    #[test]
    fn exact_distribution_is_exactly_feasible() {
        let sol = delsarte_lp(9, 4, LpMode::Exact).unwrap();
        let b = sol.exact_distribution.unwrap();
        for i in 1..=9 {
            let s = b.iter().enumerate().fold(BigRational::zero(), |acc, (j, bj)| {
                acc + BigRational::from_integer(BigInt::from(krawtchouk_int(9, i, j))) * bj
            });
            assert!(!s.is_negative());
        }
    }

    #[test]
    fn lp_dominates_zoo() {
        for n in 1..=10 {
            for code in code_zoo(n) {
                let dist = code.min_distance().min(n);
                for d in 1..=dist {
                    let sol = delsarte_lp(n, d, LpMode::Float).unwrap();
                    assert!(sol.value >= code.size() as f64 - 1e-9, "{} at d={d}", code.name);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(delsarte_lp(15, 3, LpMode::Float).is_err());
        assert!(delsarte_lp(5, 0, LpMode::Float).is_err());
        assert!(delsarte_lp(5, 6, LpMode::Float).is_err());
        assert!("fuzzy".parse::<LpMode>().is_err());
    }
}
