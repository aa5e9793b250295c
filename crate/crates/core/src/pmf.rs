//! Probability mass functions on the nonnegative integers, the triangular
//! basis `T_j`, and conversions between convex functions and their
//! triangular mixtures.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{CONVEXITY_TOL, SUM_TOL};

/// Value of the `j`-th triangular pmf at `i`: `2(j - i) / (j(j + 1))` for
/// `i < j`, zero otherwise.
pub fn triangular_value(j: usize, i: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidBasisIndex(j));
    }
    Ok(tri(j, i))
}

#[inline]
pub(crate) fn tri(j: usize, i: usize) -> f64 {
    debug_assert!(j >= 1);
    if i < j {
        2.0 * (j - i) as f64 / (j as f64 * (j + 1) as f64)
    } else {
        0.0
    }
}

pub(crate) fn trim_trailing_zeros(v: &mut Vec<f64>) {
    while v.last() == Some(&0.0) {
        v.pop();
    }
}

/// A finitely supported probability mass function on `{0, 1, 2, ...}`.
///
/// Trailing zeros are never stored, so `probs().len() - 1` is the largest
/// index carrying positive mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let mut probs = probs;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidPmf(format!("entry {i} is {p}")));
            }
        }
        trim_trailing_zeros(&mut probs);
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidPmf(format!("total mass {total} differs from 1")));
        }
        Ok(Self { probs })
    }

    /// Wraps a nonnegative vector without checking its total mass.
    pub(crate) fn from_raw(mut probs: Vec<f64>) -> Self {
        trim_trailing_zeros(&mut probs);
        Self { probs }
    }

    /// Point mass at `k`.
    pub fn dirac(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `p(i)`, zero beyond the stored support.
    pub fn get(&self, i: usize) -> f64 {
        self.probs.get(i).copied().unwrap_or(0.0)
    }

    /// Largest index with positive mass.
    pub fn support_max(&self) -> usize {
        self.probs.len().saturating_sub(1)
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(i, p)| i as f64 * p).sum()
    }

    pub fn is_convex(&self) -> ConvexityCheck {
        is_convex(&self.probs, CONVEXITY_TOL)
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}

/// Relative frequencies of an i.i.d. sample of counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPmf {
    pmf: Pmf,
    n: u64,
    counts: Vec<u64>,
    distinct_values: Vec<usize>,
}

impl EmpiricalPmf {
    /// Builds the empirical pmf of `xs`. Values that do not convert to
    /// `usize` (negative integers) are rejected.
    pub fn from_samples<T>(xs: &[T]) -> Result<Self>
    where
        T: Copy + TryInto<usize>,
    {
        if xs.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut counts: Vec<u64> = Vec::new();
        for (position, &x) in xs.iter().enumerate() {
            let v: usize = x.try_into().map_err(|_| Error::NegativeValue { position })?;
            if v >= counts.len() {
                counts.resize(v + 1, 0);
            }
            counts[v] += 1;
        }
        Ok(Self::from_count_vector(counts))
    }

    /// Builds the empirical pmf from `(value, count)` pairs. Repeated values accumulate.
    pub fn from_counts(pairs: &[(usize, u64)]) -> Result<Self> {
        let mut counts: Vec<u64> = Vec::new();
        for &(v, c) in pairs {
            if v >= counts.len() {
                counts.resize(v + 1, 0);
            }
            counts[v] += c;
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::EmptySample);
        }
        Ok(Self::from_count_vector(counts))
    }

    fn from_count_vector(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        let n: u64 = counts.iter().sum();
        let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
        let distinct_values = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
            .collect();
        Self {
            pmf: Pmf { probs },
            n,
            counts,
            distinct_values,
        }
    }

    pub fn pmf(&self) -> &Pmf {
        &self.pmf
    }

    pub fn probs(&self) -> &[f64] {
        self.pmf.probs()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.pmf.get(i)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Observed values in increasing order.
    pub fn distinct_values(&self) -> &[usize] {
        &self.distinct_values
    }

    /// Largest observed value.
    pub fn max_observed(&self) -> usize {
        self.pmf.support_max()
    }

    /// Smallest observed value.
    pub fn min_observed(&self) -> usize {
        self.distinct_values[0]
    }

    /// Convexity of the empirical pmf, decided exactly on the integer counts.
    pub fn is_convex(&self) -> ConvexityCheck {
        let c = |i: usize| self.counts.get(i).copied().unwrap_or(0) as i128;
        let s = self.counts.len() - 1;
        let mut min_second_difference = f64::INFINITY;
        let mut first_violation = None;
        for i in 1..=s + 1 {
            let d2 = c(i + 1) - 2 * c(i) + c(i - 1);
            let scaled = d2 as f64 / self.n as f64;
            min_second_difference = min_second_difference.min(scaled);
            if d2 < 0 && first_violation.is_none() {
                first_violation = Some(i);
            }
        }
        ConvexityCheck {
            convex: first_violation.is_none(),
            first_violation,
            min_second_difference,
        }
    }
}

/// Outcome of a convexity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityCheck {
    pub convex: bool,
    /// First index `i >= 1` with `f(i+1) - 2 f(i) + f(i-1) < -tol`.
    pub first_violation: Option<usize>,
    /// Smallest second difference seen (`+inf` for an empty vector).
    pub min_second_difference: f64,
}

/// Second difference `f(i+1) - 2 f(i) + f(i-1)` with `f` extended by zeros. Requires `i >= 1`.
pub fn second_difference(f: &[f64], i: usize) -> f64 {
    let at = |k: usize| f.get(k).copied().unwrap_or(0.0);
    at(i + 1) - 2.0 * at(i) + at(i - 1)
}

/// Tests `f(i+1) - 2 f(i) + f(i-1) >= -tol` for every `i` from 1 to one past
/// the stored length, `f` being extended by zeros.
pub fn is_convex(f: &[f64], tol: f64) -> ConvexityCheck {
    let mut min_second_difference = f64::INFINITY;
    let mut first_violation = None;
    for i in 1..=f.len() {
        let d2 = second_difference(f, i);
        min_second_difference = min_second_difference.min(d2);
        if d2 < -tol && first_violation.is_none() {
            first_violation = Some(i);
        }
    }
    ConvexityCheck {
        convex: first_violation.is_none(),
        first_violation,
        min_second_difference,
    }
}

/// A nonnegative measure on `{1, 2, ...}` with finite support: the
/// coefficients of a convex function in the triangular basis.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<usize, f64>", into = "BTreeMap<usize, f64>")]
pub struct TriangularMixture {
    weights: BTreeMap<usize, f64>,
}

impl TriangularMixture {
    /// Validates `j >= 1` and finite nonnegative weights; zero weights are dropped.
    pub fn new(weights: BTreeMap<usize, f64>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (j, w) in weights {
            if j == 0 {
                return Err(Error::InvalidBasisIndex(0));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidPmf(format!("mixture weight at {j} is {w}")));
            }
            if w > 0.0 {
                out.insert(j, w);
            }
        }
        Ok(Self { weights: out })
    }

    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(j, w) in pairs {
            *map.entry(j).or_insert(0.0) += w;
        }
        Self::new(map)
    }

    pub fn weights(&self) -> &BTreeMap<usize, f64> {
        &self.weights
    }

    pub fn get(&self, j: usize) -> f64 {
        self.weights.get(&j).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(&j, &w)| (j, w))
    }

    /// Total mass `sum_j pi_j`.
    pub fn mass(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Largest `j` with positive weight.
    pub fn max_index(&self) -> Option<usize> {
        self.weights.keys().next_back().copied()
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl TryFrom<BTreeMap<usize, f64>> for TriangularMixture {
    type Error = Error;

    fn try_from(m: BTreeMap<usize, f64>) -> Result<Self> {
        Self::new(m)
    }
}

impl From<TriangularMixture> for BTreeMap<usize, f64> {
    fn from(m: TriangularMixture) -> Self {
        m.weights
    }
}

/// `f(i) = sum_{j > i} w_j T_j(i)` for arbitrary (possibly negative)
/// coefficients, evaluated on `0..len`.
pub(crate) fn combine_basis<I>(coefs: I, len: usize) -> Vec<f64>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut f = vec![0.0; len];
    for (j, w) in coefs {
        for (i, fi) in f.iter_mut().enumerate().take(j.min(len)) {
            *fi += w * tri(j, i);
        }
    }
    f
}

/// Evaluates the mixture `sum_j pi_j T_j`. The result has no trailing zeros
/// and its length is at most the largest support index of `pi`.
pub fn mixture_to_pmf(pi: &TriangularMixture) -> Vec<f64> {
    let len = pi.max_index().unwrap_or(0);
    let mut f = combine_basis(pi.iter(), len);
    trim_trailing_zeros(&mut f);
    f
}

/// Recovers the unique triangular mixture of a convex, finitely supported,
/// nonnegative vector: `pi_j = j(j+1)/2 * (f(j+1) + f(j-1) - 2 f(j))`.
pub fn pmf_to_mixture(f: &[f64]) -> Result<TriangularMixture> {
    if let Some((i, &v)) = f.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidPmf(format!("entry {i} is {v}")));
    }
    let check = is_convex(f, CONVEXITY_TOL);
    if let Some(index) = check.first_violation {
        return Err(Error::NonConvex {
            index,
            value: second_difference(f, index),
        });
    }
    let mut weights = BTreeMap::new();
    for j in 1..=f.len() {
        let w = (j * (j + 1)) as f64 / 2.0 * second_difference(f, j);
        // round-off can leave tiny negatives on linear stretches
        if w > 0.0 {
            weights.insert(j, w);
        }
    }
    Ok(TriangularMixture { weights })
}

/// `F_p(j) = sum_{i <= j} p(i)`, zero for negative `j`.
pub fn cumulative_f(p: &[f64], j: isize) -> f64 {
    if j < 0 {
        return 0.0;
    }
    p.iter().take(j as usize + 1).sum()
}

/// `H_p(j) = sum_{i <= j} F_p(i)`, zero for negative `j`.
pub fn cumulative_h(p: &[f64], j: isize) -> f64 {
    if j < 0 {
        return 0.0;
    }
    let j = j as usize;
    p.iter()
        .enumerate()
        .take(j + 1)
        .map(|(i, &pi)| (j + 1 - i) as f64 * pi)
        .sum()
}

/// `H_p(0), ..., H_p(len - 1)` in one pass.
pub fn cumulative_h_seq(p: &[f64], len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let (mut f, mut h) = (0.0, 0.0);
    for i in 0..len {
        f += p.get(i).copied().unwrap_or(0.0);
        h += f;
        out.push(h);
    }
    out
}
