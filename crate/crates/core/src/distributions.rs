//! True distributions used in the simulation study, with deterministic
//! inverse-CDF samplers.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmf::{tri, Pmf};

/// Tail mass discarded when an infinite-support pmf is materialized.
pub const TAIL_MASS: f64 = 1e-12;

/// `2 - sqrt(2)`: Poisson pmfs are convex exactly for `lambda <= ` this value.
pub const POISSON_CONVEXITY_THRESHOLD: f64 = 2.0 - std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "param", rename_all = "lowercase")]
pub enum TrueDistribution {
    /// `p(i) = gamma (1 - gamma)^i`, `gamma` in `(0, 1]`.
    Geometric(f64),
    /// The triangular pmf `T_j`, `j >= 1`.
    Triangular(usize),
    /// Poisson with mean `lambda > 0`.
    Poisson(f64),
}

impl TrueDistribution {
    pub fn geometric(gamma: f64) -> Result<Self> {
        Self::Geometric(gamma).validated()
    }

    pub fn triangular(j: usize) -> Result<Self> {
        Self::Triangular(j).validated()
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        Self::Poisson(lambda).validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Geometric(g) => g > 0.0 && g <= 1.0,
            Self::Triangular(j) => j >= 1,
            Self::Poisson(l) => l > 0.0 && l.is_finite(),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidDistribution(format!("parameter out of range: {self}")))
        }
    }

    /// Short family tag as used on the command line.
    pub fn family(&self) -> &'static str {
        match self {
            Self::Geometric(_) => "geom",
            Self::Triangular(_) => "tri",
            Self::Poisson(_) => "pois",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            Self::Geometric(g) => g,
            Self::Triangular(j) => j as f64,
            Self::Poisson(l) => l,
        }
    }

    /// The pmf, truncated where the remaining tail drops below [`TAIL_MASS`]
    /// and renormalized.
    pub fn materialize(&self) -> Result<Pmf> {
        self.validated()?;
        match *self {
            Self::Triangular(j) => Pmf::new((0..j).map(|i| tri(j, i)).collect()),
            Self::Geometric(g) => {
                let q = 1.0 - g;
                truncate_tail(|i| g * q.powi(i as i32), g.max(q))
            }
            Self::Poisson(lambda) => {
                let mut terms = vec![(-lambda).exp()];
                truncate_tail(
                    |i| {
                        while terms.len() <= i {
                            let k = terms.len();
                            let next = terms[k - 1] * lambda / k as f64;
                            terms.push(next);
                        }
                        terms[i]
                    },
                    lambda,
                )
            }
        }
    }

    /// `n` i.i.d. draws by inverse CDF on the materialized pmf, from a
    /// ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<usize>> {
        let pmf = self.materialize()?;
        Ok(sample_pmf(&pmf, n, seed))
    }
}

/// Generates terms until they are negligible past `scale`, then keeps the
/// shortest prefix whose discarded tail is below [`TAIL_MASS`].
fn truncate_tail(mut term: impl FnMut(usize) -> f64, scale: f64) -> Result<Pmf> {
    let mut raw = Vec::new();
    let mut i = 0usize;
    loop {
        let t = term(i);
        raw.push(t);
        if (i as f64 > scale && t < 1e-20) || t == 0.0 || raw.len() > 10_000_000 {
            break;
        }
        i += 1;
    }
    let mut tail = 0.0;
    let mut keep = raw.len();
    for (k, &t) in raw.iter().enumerate().rev() {
        // tail holds sum of raw[k+1..]
        if tail >= TAIL_MASS {
            break;
        }
        keep = k + 1;
        tail += t;
    }
    raw.truncate(keep);
    let total: f64 = raw.iter().sum();
    Pmf::new(raw.into_iter().map(|v| v / total).collect())
}

/// Inverse-CDF sampling from an explicit pmf.
pub fn sample_pmf(pmf: &Pmf, n: usize, seed: u64) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(pmf.probs().len());
    let mut acc = 0.0;
    for &p in pmf.probs() {
        acc += p;
        cdf.push(acc);
    }
    let last = cdf.len().saturating_sub(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect()
}

impl fmt::Display for TrueDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Geometric(g) => write!(f, "geom:{g}"),
            Self::Triangular(j) => write!(f, "tri:{j}"),
            Self::Poisson(l) => write!(f, "pois:{l}"),
        }
    }
}

impl FromStr for TrueDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDistribution(format!("'{s}' (expected geom:G, tri:J or pois:L)"));
        let (family, param) = s.trim().split_once(':').ok_or_else(bad)?;
        let d = match family {
            "geom" => Self::Geometric(param.parse().map_err(|_| bad())?),
            "tri" => Self::Triangular(param.parse().map_err(|_| bad())?),
            "pois" => Self::Poisson(param.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        d.validated()
    }
}
