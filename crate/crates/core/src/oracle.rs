//! Reference solver for the same projection: Lawson-Hanson nonnegative
//! least squares over the explicit truncated triangular design matrix.
//!
//! Shares no code path with the support reduction solver beyond the basis
//! values themselves, so agreement between the two is meaningful.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::pmf::{mixture_to_pmf, triangular_value, EmpiricalPmf, Pmf, TriangularMixture};
use crate::solver::LGrowth;

const GRADIENT_TOL: f64 = 1e-13;
const MASS_TOL: f64 = 1e-8;
const MAX_ROUNDS: usize = 60;

/// `min 1/2 ||A pi - p~||^2, pi >= 0` with `A[i][j-1] = T_j(i)` for
/// `i < L`, `1 <= j <= L`.
#[derive(Debug, Clone)]
pub struct OracleProblem {
    pub l: usize,
    pub design: DMatrix<f64>,
    pub target: DVector<f64>,
}

impl OracleProblem {
    pub fn new(l: usize, ptilde: &EmpiricalPmf) -> Result<Self> {
        if l < ptilde.max_observed() + 1 {
            return Err(Error::InvalidConfig(format!("oracle truncation L = {l} too small")));
        }
        let mut design = DMatrix::zeros(l, l);
        for j in 1..=l {
            for i in 0..l {
                design[(i, j - 1)] = triangular_value(j, i)?;
            }
        }
        let target = DVector::from_fn(l, |i, _| ptilde.get(i));
        Ok(Self { l, design, target })
    }
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    /// `coefficients[j - 1] = pi_j`.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    /// `min_j (A^T (A pi - p~))_j`; nonnegative up to round-off at a KKT point.
    pub min_gradient: f64,
    /// `max |(A^T (A pi - p~))_j|` over `pi_j > 0`.
    pub max_complementarity: f64,
}

impl OracleSolution {
    pub fn mixture(&self) -> TriangularMixture {
        let pairs: Vec<(usize, f64)> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, &w)| (k + 1, w))
            .collect();
        TriangularMixture::from_pairs(&pairs).expect("NNLS iterate is nonnegative")
    }
}

fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, cols: &[usize]) -> Option<DVector<f64>> {
    let sub = a.select_columns(cols);
    sub.svd(true, true).solve(b, 1e-15).ok()
}

fn gradient(a: &DMatrix<f64>, b: &DVector<f64>, x: &DVector<f64>) -> DVector<f64> {
    a.transpose() * (a * x - b)
}

/// Lawson-Hanson active-set NNLS.
pub fn oracle_solve(prob: &OracleProblem) -> Result<OracleSolution> {
    let (a, b) = (&prob.design, &prob.target);
    let n = a.ncols();
    let max_iter = 30 * n + 100;
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let mut iterations = 0;

    loop {
        let w = -gradient(a, b, &x);
        let candidate = (0..n)
            .filter(|&k| !passive[k] && w[k] > GRADIENT_TOL)
            .max_by(|&p, &q| w[p].total_cmp(&w[q]));
        let Some(entering) = candidate else { break };
        passive[entering] = true;

        loop {
            iterations += 1;
            if iterations > max_iter {
                let g = gradient(a, b, &x);
                return Err(Error::OracleNoConvergence {
                    iterations,
                    residual: g.iter().fold(0.0f64, |m, v| m.max(-v)),
                });
            }
            let cols: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let z = least_squares(a, b, &cols).ok_or(Error::SingularGram { size: cols.len() })?;
            if z.iter().all(|&v| v > 0.0) {
                for (c, &k) in cols.iter().enumerate() {
                    x[k] = z[c];
                }
                break;
            }
            let mut step: Option<(usize, f64)> = None;
            for (c, &k) in cols.iter().enumerate() {
                if z[c] <= 0.0 {
                    let ratio = x[k] / (x[k] - z[c]);
                    if step.is_none_or(|(_, r)| ratio < r) {
                        step = Some((k, ratio));
                    }
                }
            }
            let (leaving, alpha) = step.expect("some passive coefficient is nonpositive");
            for (c, &k) in cols.iter().enumerate() {
                x[k] += alpha * (z[c] - x[k]);
            }
            x[leaving] = 0.0;
            for &k in &cols {
                if x[k] <= 0.0 {
                    x[k] = 0.0;
                    passive[k] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }

    let g = gradient(a, b, &x);
    let min_gradient = g.iter().copied().fold(f64::INFINITY, f64::min);
    let max_complementarity = (0..n)
        .filter(|&k| x[k] > 0.0)
        .map(|k| g[k].abs())
        .fold(0.0, f64::max);
    Ok(OracleSolution {
        coefficients: x.iter().copied().collect(),
        iterations,
        min_gradient,
        max_complementarity,
    })
}

#[derive(Debug, Clone)]
pub struct OracleFit {
    pub pmf: Pmf,
    pub mixture: TriangularMixture,
    pub l: usize,
}

/// Grows `L` on the same schedule as the main solver until the NNLS
/// solution is a probability measure.
pub fn oracle_fit(ptilde: &EmpiricalPmf) -> Result<OracleFit> {
    let mut l = ptilde.max_observed() + 1;
    let mut last_mass = 0.0;
    for _ in 0..MAX_ROUNDS {
        let sol = oracle_solve(&OracleProblem::new(l, ptilde)?)?;
        let mixture = sol.mixture();
        last_mass = mixture.mass();
        if (last_mass - 1.0).abs() <= MASS_TOL {
            let pmf = Pmf::from_raw(mixture_to_pmf(&mixture));
            return Ok(OracleFit { pmf, mixture, l });
        }
        l = LGrowth::HalfStep.next(l);
    }
    Err(Error::OracleNoConvergence {
        iterations: MAX_ROUNDS,
        residual: (last_mass - 1.0).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emp(xs: &[u32]) -> EmpiricalPmf {
        EmpiricalPmf::from_samples(xs).unwrap()
    }

    #[test]
    fn exact_representations() {
        let sol = oracle_solve(&OracleProblem::new(2, &emp(&[0])).unwrap()).unwrap();
        assert!((sol.coefficients[0] - 1.0).abs() < 1e-14 && sol.coefficients[1] == 0.0);

        let pt = EmpiricalPmf::from_counts(&[(0, 2), (1, 1)]).unwrap();
        let sol = oracle_solve(&OracleProblem::new(3, &pt).unwrap()).unwrap();
        assert!(sol.coefficients[0].abs() < 1e-14);
        assert!((sol.coefficients[1] - 1.0).abs() < 1e-14);
        assert!(sol.coefficients[2].abs() < 1e-14);
    }

    #[test]
    fn kkt_residuals_on_nonconvex_input() {
        let sol = oracle_solve(&OracleProblem::new(4, &emp(&[0, 0, 1, 2])).unwrap()).unwrap();
        assert!(sol.min_gradient >= -1e-10);
        assert!(sol.max_complementarity <= 1e-10);
        let want = [1.0 / 12.0, 0.0, 0.5, 5.0 / 12.0];
        for (got, w) in sol.coefficients.iter().zip(want) {
            assert!((got - w).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_fit_examples() {
        let r = oracle_fit(&emp(&[0, 0, 0, 1])).unwrap();
        assert!((r.pmf.get(0) - 0.75).abs() < 1e-14 && (r.pmf.get(1) - 0.25).abs() < 1e-14);
        let r = oracle_fit(&emp(&[0, 0, 1, 2])).unwrap();
        assert!((r.pmf.get(1) - 7.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_truncation() {
        assert!(OracleProblem::new(2, &emp(&[0, 4])).is_err());
    }
}
