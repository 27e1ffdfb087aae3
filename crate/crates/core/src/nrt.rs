//! Ordered Hamming (Niederreiter-Rosenbloom-Tsfasman) space: vectors of `n`
//! blocks of length `r` over `Z_q`, their shapes and the shape distribution.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Most shapes `enumerate_shapes` will produce.
pub const SHAPE_BUDGET: u128 = 1_000_000;
/// Most vectors the exhaustive oracle will visit.
pub const VECTOR_BUDGET: u128 = 1 << 24;

/// `(e_1, ..., e_r)`: `e_i` blocks have their rightmost nonzero entry at
/// in-block position `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShapeVector {
    pub r: usize,
    pub n: usize,
    pub e: Vec<usize>,
}

impl ShapeVector {
    pub fn new(r: usize, n: usize, e: Vec<usize>) -> Result<Self> {
        if e.len() != r {
            return Err(Error::DimensionMismatch(e.len(), r));
        }
        if e.iter().sum::<usize>() > n {
            return Err(Error::InvalidInput(format!("shape {e:?} has more than n = {n} blocks")));
        }
        Ok(Self { r, n, e })
    }

    /// Number of all-zero blocks.
    pub fn e0(&self) -> usize {
        self.n - self.e.iter().sum::<usize>()
    }

    /// `sum_i i e_i`.
    pub fn weight(&self) -> usize {
        self.e.iter().enumerate().map(|(i, c)| (i + 1) * c).sum()
    }
}

impl fmt::Display for ShapeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.e.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NrtVector {
    pub r: usize,
    pub n: usize,
    pub q: u32,
    pub entries: Vec<u32>,
}

impl NrtVector {
    pub fn new(r: usize, n: usize, q: u32, entries: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("alphabet size q = {q} must be at least 2")));
        }
        if entries.len() != r * n {
            return Err(Error::DimensionMismatch(entries.len(), r * n));
        }
        if let Some(bad) = entries.iter().find(|&&v| v >= q) {
            return Err(Error::InvalidInput(format!("entry {bad} is not in Z_{q}")));
        }
        Ok(Self { r, n, q, entries })
    }

    pub fn zero(r: usize, n: usize, q: u32) -> Self {
        Self { r, n, q, entries: vec![0; r * n] }
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[u32]> {
        self.entries.chunks(self.r)
    }
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `|Delta_{r,n}| = C(n + r, r)`.
pub fn shape_count(r: usize, n: usize) -> u128 {
    binomial_u128((n + r) as u128, r as u128)
}

/// All shapes with `sum e_i <= n`, in colexicographic order (the last
/// coordinate varies slowest).
pub fn enumerate_shapes(r: usize, n: usize) -> Result<Vec<ShapeVector>> {
    if r == 0 || n == 0 {
        return Err(Error::InvalidInput("need r >= 1 and n >= 1".into()));
    }
    let count = shape_count(r, n);
    if count > SHAPE_BUDGET {
        return Err(Error::BudgetExceeded(count));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut e = vec![0usize; r];
    fill(&mut e, r, n, r, &mut out);
    Ok(out)
}

// Fixes coordinates from the last one down so earlier ones vary fastest.
fn fill(e: &mut [usize], r: usize, n: usize, pos: usize, out: &mut Vec<ShapeVector>) {
    if pos == 0 {
        out.push(ShapeVector { r, n, e: e.to_vec() });
        return;
    }
    let used: usize = e[pos..].iter().sum();
    for v in 0..=n - used {
        e[pos - 1] = v;
        fill(e, r, n, pos - 1, out);
    }
    e[pos - 1] = 0;
}

pub fn shape_of(x: &NrtVector) -> ShapeVector {
    let mut e = vec![0; x.r];
    for block in x.blocks() {
        if let Some(pos) = block.iter().rposition(|&v| v != 0) {
            e[pos] += 1;
        }
    }
    ShapeVector { r: x.r, n: x.n, e }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `w(e) = n! prod_{i=0}^r p_i^{e_i} / e_i!` with `p_0 = q^{-r}` and
/// `p_i = q^{i-r-1}(q-1)`: the fraction of `Z_q^{rn}` having shape `e`.
pub fn shape_weight(e: &ShapeVector, q: u32) -> Result<BigRational> {
    if q < 2 {
        return Err(Error::InvalidInput(format!("alphabet size q = {q} must be at least 2")));
    }
    let qb = BigInt::from(q);
    let r = e.r;
    let mut num = factorial(e.n);
    let mut den = factorial(e.e0()) * num::pow(qb.clone(), r * e.e0());
    for (idx, &c) in e.e.iter().enumerate() {
        let i = idx + 1;
        // p_i = (q - 1) / q^{r + 1 - i}
        num *= num::pow(BigInt::from(q - 1), c);
        den *= factorial(c) * num::pow(qb.clone(), (r + 1 - i) * c);
    }
    Ok(BigRational::new(num, den))
}

/// `w(x - y)` with the difference taken in `Z_q`.
pub fn nrt_distance(x: &NrtVector, y: &NrtVector) -> Result<usize> {
    if x.r != y.r || x.n != y.n {
        return Err(Error::DimensionMismatch(x.entries.len(), y.entries.len()));
    }
    if x.q != y.q {
        return Err(Error::InvalidInput(format!("alphabets differ: {} vs {}", x.q, y.q)));
    }
    let q = x.q;
    let entries = x.entries.iter().zip(&y.entries).map(|(a, b)| (a + q - b) % q).collect();
    Ok(shape_of(&NrtVector { r: x.r, n: x.n, q, entries }).weight())
}

/// Every vector of `Z_q^{rn}` in lexicographic order of entries.
pub fn all_vectors(r: usize, n: usize, q: u32) -> Result<Vec<NrtVector>> {
    let total = (q as u128).checked_pow((r * n) as u32).unwrap_or(u128::MAX);
    if total > VECTOR_BUDGET {
        return Err(Error::BudgetExceeded(total));
    }
    let len = r * n;
    Ok((0..total)
        .map(|mut idx| {
            let mut entries = vec![0u32; len];
            for slot in entries.iter_mut().rev() {
                *slot = (idx % q as u128) as u32;
                idx /= q as u128;
            }
            NrtVector { r, n, q, entries }
        })
        .collect())
}

/// Number of vectors of each shape, by brute force.
pub fn exhaustive_shape_counts(r: usize, n: usize, q: u32) -> Result<BTreeMap<Vec<usize>, u128>> {
    let mut counts = BTreeMap::new();
    for v in all_vectors(r, n, q)? {
        *counts.entry(shape_of(&v).e).or_insert(0) += 1;
    }
    Ok(counts)
}

/// One row of the shape table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeRow {
    pub shape: String,
    pub e0: usize,
    pub nrt_weight: usize,
    pub weight: String,
    pub weight_f64: f64,
}

pub fn shape_table(r: usize, n: usize, q: u32) -> Result<Vec<ShapeRow>> {
    enumerate_shapes(r, n)?
        .into_iter()
        .map(|e| {
            let w = shape_weight(&e, q)?;
            Ok(ShapeRow {
                shape: e.to_string(),
                e0: e.e0(),
                nrt_weight: e.weight(),
                weight_f64: num::ToPrimitive::to_f64(&w).unwrap_or(f64::NAN),
                weight: w.to_string(),
            })
        })
        .collect()
}

/// Fraction of the space at each NRT weight `0..=rn`, exact.
pub fn weight_distribution(r: usize, n: usize, q: u32) -> Result<Vec<BigRational>> {
    let mut out = vec![BigRational::zero(); r * n + 1];
    for e in enumerate_shapes(r, n)? {
        out[e.weight()] += shape_weight(&e, q)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn shape_enumeration_examples() {
        let s: Vec<Vec<usize>> = enumerate_shapes(2, 1).unwrap().into_iter().map(|e| e.e).collect();
        assert_eq!(s, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        let s: Vec<Vec<usize>> = enumerate_shapes(1, 4).unwrap().into_iter().map(|e| e.e).collect();
        assert_eq!(s, (0..=4).map(|i| vec![i]).collect::<Vec<_>>());
        assert_eq!(enumerate_shapes(2, 3).unwrap().len(), 10);
        assert!(matches!(enumerate_shapes(30, 30), Err(Error::BudgetExceeded(_))));
        assert!(enumerate_shapes(0, 3).is_err());
    }

    #[test]
    fn shapes_are_distinct_and_counted() {
        for r in 1..5 {
            for n in 1..6 {
                let s = enumerate_shapes(r, n).unwrap();
                assert_eq!(s.len() as u128, shape_count(r, n));
                let set: std::collections::HashSet<_> = s.iter().collect();
                assert_eq!(set.len(), s.len());
            }
        }
    }

    #[test]
    fn shape_of_examples() {
        let x = NrtVector::new(2, 2, 2, vec![0, 0, 1, 0]).unwrap();
        let e = shape_of(&x);
        assert_eq!((e.e.clone(), e.e0()), (vec![1, 0], 1));
        let z = NrtVector::zero(2, 2, 2);
        assert_eq!(shape_of(&z).e0(), 2);
        let y = NrtVector::new(2, 2, 2, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(shape_of(&y).e, vec![0, 2]);
    }

    #[test]
    fn weights_sum_to_one_and_match_counts() {
        for q in [2u32, 3] {
            for r in 1..=3 {
                for n in 1..=3 {
                    if (q as u128).pow((r * n) as u32) > 100_000 {
                        continue;
                    }
                    let counts = exhaustive_shape_counts(r, n, q).unwrap();
                    let total = BigInt::from(q).pow((r * n) as u32);
                    let mut sum = BigRational::zero();
                    for e in enumerate_shapes(r, n).unwrap() {
                        let w = shape_weight(&e, q).unwrap();
                        let scaled = &w * BigRational::from_integer(total.clone());
                        assert!(scaled.is_integer());
                        let c = counts.get(&e.e).copied().unwrap_or(0);
                        assert_eq!(scaled.to_integer(), BigInt::from(c), "{e}");
                        sum += w;
                    }
                    assert_eq!(sum, BigRational::one());
                }
            }
        }
    }

    #[test]
    fn single_shape_weight() {
        let e = ShapeVector::new(2, 2, vec![1, 0]).unwrap();
        assert_eq!(shape_weight(&e, 2).unwrap(), rat(2, 16));
    }

    #[test]
    fn r_one_is_binomial() {
        let n = 6;
        for q in [2u32, 5] {
            for e1 in 0..=n {
                let e = ShapeVector::new(1, n, vec![e1]).unwrap();
                let c = crate::lp_oracle::binomial_int(n as i64, e1 as i64);
                let expect = BigRational::new(
                    BigInt::from(c) * BigInt::from(q - 1).pow(e1 as u32),
                    BigInt::from(q).pow(n as u32),
                );
                assert_eq!(shape_weight(&e, q).unwrap(), expect);
            }
        }
    }

    #[test]
    fn distance_examples() {
        let x = NrtVector::new(2, 2, 2, vec![0, 0, 1, 0]).unwrap();
        let z = NrtVector::zero(2, 2, 2);
        assert_eq!(nrt_distance(&x, &x).unwrap(), 0);
        assert_eq!(nrt_distance(&x, &z).unwrap(), 1);
        let other = NrtVector::zero(3, 2, 2);
        assert!(nrt_distance(&x, &other).is_err());
    }

    #[test]
    fn metric_axioms_exhaustive() {
        for q in [2u32, 3] {
            let (r, n) = if q == 2 { (2, 2) } else { (2, 1) };
            let vs = all_vectors(r, n, q).unwrap();
            for x in &vs {
                for y in &vs {
                    let dxy = nrt_distance(x, y).unwrap();
                    assert_eq!(dxy, nrt_distance(y, x).unwrap());
                    assert_eq!(dxy == 0, x == y);
                    for z in &vs {
                        assert!(dxy <= nrt_distance(x, z).unwrap() + nrt_distance(z, y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn r_one_metric_is_hamming() {
        let vs = all_vectors(1, 4, 3).unwrap();
        for x in vs.iter().step_by(7) {
            for y in &vs {
                let ham = x.entries.iter().zip(&y.entries).filter(|(a, b)| a != b).count();
                assert_eq!(nrt_distance(x, y).unwrap(), ham);
            }
        }
    }

    #[test]
    fn weight_distribution_sums_to_one() {
        let w = weight_distribution(3, 2, 2).unwrap();
        assert_eq!(w.iter().fold(BigRational::zero(), |a, b| a + b), BigRational::one());
        assert_eq!(w[0], rat(1, 64));
    }

    #[test]
    fn vector_validation() {
        assert!(NrtVector::new(2, 2, 2, vec![0, 0, 2, 0]).is_err());
        assert!(NrtVector::new(2, 2, 2, vec![0, 0, 1]).is_err());
        assert!(NrtVector::new(2, 2, 1, vec![0, 0, 0, 0]).is_err());
    }
}
