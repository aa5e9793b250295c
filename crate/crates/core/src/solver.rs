//! Least-squares projection of an empirical pmf onto the convex cone via
//! the support reduction algorithm over triangular mixtures.
//!
//! For a fixed truncation `L` the algorithm minimizes
//! `Psi(pi) = 1/2 sum_i f(i)^2 - sum_i f(i) p~(i)`, `f = sum_j pi_j T_j`,
//! over nonnegative measures supported in `{1, ..., L}`. The outer loop
//! grows `L` until the minimizer has total mass one, at which point it is
//! the unrestricted estimator.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{certify_parts, CertificateReport};
use crate::error::{Error, Result};
use crate::pmf::{combine_basis, tri, EmpiricalPmf, Pmf, TriangularMixture};
use crate::tolerances::CertifyTolerances;

/// How the truncation level grows between outer rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LGrowth {
    /// `L <- L + max(1, ceil(L / 2))`.
    #[default]
    HalfStep,
    /// `L <- L + step` (a step of zero is treated as one).
    Additive(usize),
}

impl LGrowth {
    pub fn next(self, l: usize) -> usize {
        match self {
            LGrowth::HalfStep => l + l.div_ceil(2).max(1),
            LGrowth::Additive(step) => l + step.max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Inner loop stops once `j(j+1)/2 d_j >= -d_tol` for every `j <= L`,
    /// which implies `d_j >= -d_tol`.
    pub d_tol: f64,
    /// Stopping rule for the outer loop: `|sum pi - 1| <= mass_tol`.
    pub mass_tol: f64,
    pub l_growth: LGrowth,
    pub max_outer: usize,
    /// Cap on Step-1 plus Step-2 iterations for a single `L`.
    pub max_inner: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            d_tol: 1e-10,
            mass_tol: 1e-8,
            l_growth: LGrowth::HalfStep,
            max_outer: 60,
            max_inner: 10_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_tol.is_finite() && self.d_tol > 0.0 && self.mass_tol.is_finite() && self.mass_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.max_outer == 0 || self.max_inner == 0 {
            return Err(Error::InvalidConfig("iteration caps must be at least 1".into()));
        }
        Ok(())
    }
}

/// One accepted iterate of the algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    /// Truncation level in force.
    pub l: usize,
    /// Inner iteration counter within this `L`.
    pub iteration: usize,
    pub active_size: usize,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub pmf: Pmf,
    pub mixture: TriangularMixture,
    /// `Psi` at `mixture`.
    pub objective: f64,
    pub final_l: usize,
    pub trace: Vec<TraceRecord>,
    pub certificate: CertificateReport,
}

/// Minimizer over `M^L` for a single truncation level.
#[derive(Debug, Clone)]
pub struct FixedLFit {
    pub l: usize,
    pub mixture: TriangularMixture,
    pub objective: f64,
    pub trace: Vec<TraceRecord>,
}

/// `Q(f) = 1/2 sum f(i)^2 - sum f(i) p~(i)`.
pub fn criterion_q(f: &[f64], ptilde: &EmpiricalPmf) -> f64 {
    let sq: f64 = f.iter().map(|v| v * v).sum();
    let cross: f64 = f.iter().enumerate().map(|(i, v)| v * ptilde.get(i)).sum();
    0.5 * sq - cross
}

/// `Psi(pi) = Q(sum_j pi_j T_j)`; coefficients may be negative.
pub fn criterion_psi<I>(coefs: I, ptilde: &EmpiricalPmf) -> f64
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let coefs: Vec<(usize, f64)> = coefs.into_iter().collect();
    let len = coefs.iter().map(|&(j, _)| j).max().unwrap_or(0);
    criterion_q(&combine_basis(coefs, len), ptilde)
}

/// Derivative of `Psi` at `mu` in the direction of the point mass at `j`:
/// `sum_{l < j} T_j(l) (sum_{j' > l} mu_j' T_j'(l) - p~(l))`.
pub fn directional_derivative<I>(j: usize, mu: I, ptilde: &EmpiricalPmf) -> Result<f64>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    if j == 0 {
        return Err(Error::InvalidBasisIndex(0));
    }
    let f = combine_basis(mu, j);
    Ok((0..j).map(|l| tri(j, l) * (f[l] - ptilde.get(l))).sum())
}

/// `d_1, ..., d_jmax` at the function `f`, using
/// `d_j = 2 / (j (j + 1)) * H_{f - p~}(j - 1)`.
pub(crate) fn derivatives_from_values(f: &[f64], ptilde: &EmpiricalPmf, jmax: usize) -> Vec<f64> {
    let mut d = Vec::with_capacity(jmax);
    let (mut cum_f, mut cum_h) = (0.0, 0.0);
    for j in 1..=jmax {
        let l = j - 1;
        cum_f += f.get(l).copied().unwrap_or(0.0) - ptilde.get(l);
        cum_h += cum_f;
        d.push(2.0 / (j as f64 * (j + 1) as f64) * cum_h);
    }
    d
}

fn gram_entry(j: usize, k: usize) -> f64 {
    (0..j.min(k)).map(|l| tri(j, l) * tri(k, l)).sum()
}

const NEGLIGIBLE_WEIGHT: f64 = 1e-13;
const POLISH_WEIGHT: f64 = 1e-10;

/// Truncation levels beyond this are treated as divergence of the outer loop.
pub const MAX_TRUNCATION: usize = 1 << 22;

fn basis_projection(j: usize, ptilde: &EmpiricalPmf) -> f64 {
    (0..j).map(|l| tri(j, l) * ptilde.get(l)).sum()
}

/// Unconstrained-in-sign minimizer of `Psi` over measures supported on
/// `support`: solves `G pi = b` with `G` the Gram matrix of the selected
/// triangular columns and `b_j = <T_j, p~>`.
pub fn restricted_minimizer(support: &[usize], ptilde: &EmpiricalPmf) -> Result<Vec<(usize, f64)>> {
    if support.is_empty() {
        return Err(Error::InvalidConfig("restricted minimizer needs a nonempty support".into()));
    }
    if support.contains(&0) {
        return Err(Error::InvalidBasisIndex(0));
    }
    let m = support.len();
    let g = DMatrix::from_fn(m, m, |a, b| gram_entry(support[a], support[b]));
    let b = DVector::from_fn(m, |a, _| basis_projection(support[a], ptilde));
    let sol = match g.clone().cholesky() {
        Some(ch) => Some(ch.solve(&b)),
        None => g.lu().solve(&b),
    };
    match sol {
        Some(x) if x.iter().all(|v| v.is_finite()) => {
            Ok(support.iter().copied().zip(x.iter().copied()).collect())
        }
        _ => Err(Error::SingularGram { size: m }),
    }
}

fn objective_of(coefs: &[(usize, f64)], ptilde: &EmpiricalPmf) -> f64 {
    criterion_psi(coefs.iter().copied(), ptilde)
}

fn to_mixture(coefs: &[(usize, f64)]) -> TriangularMixture {
    let pairs: Vec<(usize, f64)> = coefs.iter().map(|&(j, w)| (j, w.max(0.0))).collect();
    TriangularMixture::from_pairs(&pairs).expect("iterate weights are nonnegative")
}

fn cap_error(l: usize, cap: usize, coefs: &[(usize, f64)], ptilde: &EmpiricalPmf) -> Error {
    let mixture = to_mixture(coefs);
    let pmf = mixture_pmf(&mixture);
    let certificate = certify_parts(&mixture, &pmf, l, ptilde, &CertifyTolerances::default());
    Error::InnerCapExceeded {
        l,
        cap,
        last: Box::new(mixture),
        certificate: Box::new(certificate),
    }
}

fn mixture_pmf(mixture: &TriangularMixture) -> Pmf {
    Pmf::from_raw(crate::pmf::mixture_to_pmf(mixture))
}

/// Runs the support reduction algorithm for one truncation level, either
/// from the single-component initialisation at `L` or from `warm`.
fn reduce_support(
    l: usize,
    ptilde: &EmpiricalPmf,
    cfg: &SolverConfig,
    warm: Option<&[(usize, f64)]>,
    trace: &mut Vec<TraceRecord>,
) -> Result<Vec<(usize, f64)>> {
    let mut current: Vec<(usize, f64)> = match warm {
        Some(w) if !w.is_empty() => w.to_vec(),
        _ => {
            let w = basis_projection(l, ptilde) / gram_entry(l, l);
            vec![(l, w)]
        }
    };
    let mut iteration = 0usize;
    trace.push(TraceRecord {
        l,
        iteration,
        active_size: current.len(),
        objective: objective_of(&current, ptilde),
    });

    loop {
        // Step 1: full scan of d_1..d_L.
        iteration += 1;
        if iteration > cfg.max_inner {
            return Err(cap_error(l, cfg.max_inner, &current, ptilde));
        }
        let f = combine_basis(current.iter().copied(), l);
        let d = derivatives_from_values(&f, ptilde, l);
        let (best, _) = d
            .iter()
            .enumerate()
            .fold((0usize, f64::INFINITY), |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc });
        // the stopping test uses j(j+1)/2 d_j = H_{f - p~}(j - 1), so the
        // threshold does not loosen as 1/j^2 for long supports; it implies
        // d_j >= -d_tol
        let converged = d
            .iter()
            .enumerate()
            .all(|(k, &v)| v * ((k + 1) * (k + 2)) as f64 / 2.0 >= -cfg.d_tol);
        if converged {
            return Ok(current);
        }
        let entering = best + 1;

        // Step 2 on S' = S + {entering}, starting from the current point.
        let mut point: Vec<(usize, f64)> = current.clone();
        if !point.iter().any(|&(j, _)| j == entering) {
            point.push((entering, 0.0));
            point.sort_by_key(|&(j, _)| j);
        }
        loop {
            iteration += 1;
            if iteration > cfg.max_inner {
                return Err(cap_error(l, cfg.max_inner, &current, ptilde));
            }
            if point.is_empty() {
                current = point;
                break;
            }
            let support: Vec<usize> = point.iter().map(|&(j, _)| j).collect();
            let star = restricted_minimizer(&support, ptilde)?;
            if star.iter().all(|&(_, w)| w >= 0.0) {
                // weights at round-off level are zero at the exact minimizer;
                // re-solve without them so they don't pollute the support
                let kept: Vec<(usize, f64)> =
                    star.iter().copied().filter(|&(_, w)| w > NEGLIGIBLE_WEIGHT).collect();
                if !kept.is_empty() && kept.len() < star.len() {
                    point = kept;
                    continue;
                }
                current = star.into_iter().filter(|&(_, w)| w > 0.0).collect();
                break;
            }
            // Step 2b: move to the boundary of the feasible segment and drop
            // the coordinate that hits zero first.
            let mut leave: Option<(usize, f64)> = None;
            for (k, (&(_, cur), &(_, target))) in point.iter().zip(star.iter()).enumerate() {
                if target < cur {
                    let eps = cur / (cur - target);
                    if leave.is_none_or(|(_, e)| eps < e) {
                        leave = Some((k, eps));
                    }
                }
            }
            let (k_out, eps) = leave.expect("a negative component lies strictly below the iterate");
            for (p, s) in point.iter_mut().zip(star.iter()) {
                p.1 += eps * (s.1 - p.1);
            }
            point[k_out].1 = 0.0;
            point.retain(|&(_, w)| w > 0.0);
        }
        trace.push(TraceRecord {
            l,
            iteration,
            active_size: current.len(),
            objective: objective_of(&current, ptilde),
        });
    }
}

/// Drops weights below [`POLISH_WEIGHT`] and re-solves on the remaining
/// support. Such weights sit at the round-off level of the Gram solve and
/// would otherwise show up as a spurious tail of the fitted pmf.
fn polish(coefs: Vec<(usize, f64)>, ptilde: &EmpiricalPmf) -> Vec<(usize, f64)> {
    let support: Vec<usize> = coefs
        .iter()
        .filter(|&&(_, w)| w > POLISH_WEIGHT)
        .map(|&(j, _)| j)
        .collect();
    if support.len() == coefs.len() || support.is_empty() {
        return coefs;
    }
    match restricted_minimizer(&support, ptilde) {
        Ok(star) if star.iter().all(|&(_, w)| w > 0.0) => star,
        _ => coefs,
    }
}

/// Minimizes `Psi` over nonnegative measures supported in `{1, ..., l}`.
/// Requires `l >= max observed value + 1`.
pub fn fit_fixed_l(l: usize, ptilde: &EmpiricalPmf, cfg: &SolverConfig) -> Result<FixedLFit> {
    cfg.validate()?;
    if l < ptilde.max_observed() + 1 {
        return Err(Error::InvalidConfig(format!(
            "L = {l} is below the largest observation plus one ({})",
            ptilde.max_observed() + 1
        )));
    }
    let mut trace = Vec::new();
    let coefs = reduce_support(l, ptilde, cfg, None, &mut trace)?;
    Ok(FixedLFit {
        l,
        objective: objective_of(&coefs, ptilde),
        mixture: to_mixture(&coefs),
        trace,
    })
}

/// Computes the least-squares convex pmf for `ptilde`.
pub fn fit(ptilde: &EmpiricalPmf, cfg: &SolverConfig) -> Result<FitResult> {
    cfg.validate()?;
    let tolerances = CertifyTolerances::default();

    if ptilde.max_observed() == 0 {
        let mixture = TriangularMixture::from_pairs(&[(1, 1.0)])?;
        let pmf = Pmf::dirac(0);
        let objective = criterion_q(pmf.probs(), ptilde);
        let certificate = certify_parts(&mixture, &pmf, 1, ptilde, &tolerances);
        return Ok(FitResult {
            pmf,
            mixture,
            objective,
            final_l: 1,
            trace: vec![TraceRecord {
                l: 1,
                iteration: 0,
                active_size: 1,
                objective,
            }],
            certificate,
        });
    }

    let mut l = ptilde.max_observed() + 1;
    let mut warm: Option<Vec<(usize, f64)>> = None;
    let mut trace = Vec::new();
    let mut last_mass = 0.0;
    for _ in 0..cfg.max_outer {
        let coefs = reduce_support(l, ptilde, cfg, warm.as_deref(), &mut trace)?;
        let mass: f64 = coefs.iter().map(|&(_, w)| w).sum();
        last_mass = mass;
        if (mass - 1.0).abs() <= cfg.mass_tol {
            let coefs = polish(coefs, ptilde);
            let mixture = to_mixture(&coefs);
            let pmf = mixture_pmf(&mixture);
            let objective = objective_of(&coefs, ptilde);
            let certificate = certify_parts(&mixture, &pmf, l, ptilde, &tolerances);
            return Ok(FitResult {
                pmf,
                mixture,
                objective,
                final_l: l,
                trace,
                certificate,
            });
        }
        warm = Some(coefs);
        l = cfg.l_growth.next(l);
        if l > MAX_TRUNCATION {
            break;
        }
    }
    let last = warm.unwrap_or_default();
    let mixture = to_mixture(&last);
    let pmf = mixture_pmf(&mixture);
    let certificate = certify_parts(&mixture, &pmf, l, ptilde, &tolerances);
    Err(Error::OuterCapExceeded {
        cap: cfg.max_outer,
        mass: last_mass,
        last: Box::new(mixture),
        certificate: Box::new(certificate),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emp(xs: &[u32]) -> EmpiricalPmf {
        EmpiricalPmf::from_samples(xs).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn criterion_q_examples() {
        let one = emp(&[0]);
        assert!(close(criterion_q(&[1.0], &one), -0.5, 1e-15));
        assert_eq!(criterion_q(&[], &one), 0.0);
        assert_eq!(criterion_q(&[0.0, 0.0], &one), 0.0);
        let pt = emp(&[0, 0, 1, 2]);
        let q = criterion_q(&[2.0 / 3.0, 1.0 / 3.0], &pt);
        assert!(close(q, -5.0 / 36.0, 1e-15));
        // least-squares identity
        let f = [2.0 / 3.0, 1.0 / 3.0, 0.0];
        let ls: f64 = (0..3).map(|i| 0.5 * (f[i] - pt.get(i)).powi(2)).sum();
        let half_sq: f64 = pt.probs().iter().map(|p| 0.5 * p * p).sum();
        assert!(close(q, ls - half_sq, 1e-15));
    }

    #[test]
    fn criterion_psi_examples() {
        assert!(close(criterion_psi([(1, 1.0)], &emp(&[0])), -0.5, 1e-15));
        assert_eq!(criterion_psi([], &emp(&[0])), 0.0);
        assert!(close(criterion_psi([(2, 1.0)], &emp(&[0, 0, 1, 2])), -5.0 / 36.0, 1e-15));
    }

    #[test]
    fn directional_derivative_examples() {
        let one = emp(&[0]);
        assert!(close(directional_derivative(1, [], &one).unwrap(), -1.0, 1e-15));
        assert!(close(directional_derivative(1, [(1, 1.0)], &one).unwrap(), 0.0, 1e-15));
        let pt = emp(&[0, 0, 1, 2]);
        assert!(close(directional_derivative(3, [], &pt).unwrap(), -3.0 / 8.0, 1e-15));
        assert!(directional_derivative(0, [], &pt).is_err());
    }

    #[test]
    fn directional_derivative_matches_finite_difference() {
        let pt = emp(&[0, 0, 1, 2]);
        let mu = [(1usize, 0.2), (4, 0.5)];
        for j in 1..=6 {
            let d = directional_derivative(j, mu, &pt).unwrap();
            let eps = 1e-7;
            let mut moved = mu.to_vec();
            moved.push((j, eps));
            let fd = (criterion_psi(moved, &pt) - criterion_psi(mu, &pt)) / eps;
            // second-order term is eps/2 * ||T_j||^2 <= eps/2
            assert!(close(d, fd, 1e-6), "j = {j}: {d} vs {fd}");
        }
    }

    #[test]
    fn batch_derivatives_agree_with_direct_sum() {
        let pt = emp(&[0, 1, 1, 3, 5, 5, 6]);
        let mu = [(2usize, 0.3), (7, 0.4), (9, 0.1)];
        let f = combine_basis(mu, 12);
        let batch = derivatives_from_values(&f, &pt, 12);
        for j in 1..=12 {
            let direct = directional_derivative(j, mu, &pt).unwrap();
            assert!(close(batch[j - 1], direct, 1e-15), "j = {j}");
        }
    }

    #[test]
    fn restricted_minimizer_examples() {
        let one = emp(&[0]);
        let s = restricted_minimizer(&[1], &one).unwrap();
        assert!(close(s[0].1, 1.0, 1e-15));

        let pt = emp(&[0, 0, 1, 2]);
        for l in 1..8 {
            let s = restricted_minimizer(&[l], &pt).unwrap();
            let num: f64 = (0..l).map(|i| tri(l, i) * pt.get(i)).sum();
            let den: f64 = (0..l).map(|i| tri(l, i).powi(2)).sum();
            assert!(close(s[0].1, num / den, 1e-14));
        }

        // exact rational solve of the 2x2 system gives (1/20, 9/10)
        let s = restricted_minimizer(&[1, 3], &pt).unwrap();
        assert!(close(s[0].1, 0.05, 1e-14) && close(s[1].1, 0.9, 1e-14));
        for j in [1, 3] {
            let d = directional_derivative(j, s.iter().copied(), &pt).unwrap();
            assert!(d.abs() <= 1e-10, "d_{j} = {d}");
        }
    }

    #[test]
    fn fixed_l_trivial_cases() {
        let cfg = SolverConfig::default();
        let r = fit_fixed_l(1, &emp(&[0]), &cfg).unwrap();
        assert_eq!(r.mixture.support(), vec![1]);
        assert!(close(r.mixture.get(1), 1.0, 1e-15));

        let pt = emp(&[0, 0, 0, 1]);
        let r = fit_fixed_l(2, &pt, &cfg).unwrap();
        let f = crate::pmf::mixture_to_pmf(&r.mixture);
        assert!(close(f[0], 0.75, 1e-14) && close(f[1], 0.25, 1e-14));

        assert!(fit_fixed_l(2, &emp(&[0, 4]), &cfg).is_err());
    }

    #[test]
    fn fixed_l_nonconvex_matches_frozen_projection() {
        // reference NNLS over the 4x4 triangular design, computed offline
        let pt = emp(&[0, 0, 1, 2]);
        let r = fit_fixed_l(4, &pt, &SolverConfig::default()).unwrap();
        let want = [(1usize, 1.0 / 12.0), (3, 0.5), (4, 5.0 / 12.0)];
        assert_eq!(r.mixture.support(), vec![1, 3, 4]);
        for (j, w) in want {
            assert!(close(r.mixture.get(j), w, 1e-12), "pi_{j}");
        }
    }

    #[test]
    fn fit_examples() {
        let cfg = SolverConfig::default();
        let r = fit(&emp(&[0, 0, 0, 1]), &cfg).unwrap();
        assert_eq!(r.final_l, 2);
        assert!(close(r.pmf.get(0), 0.75, 1e-14) && close(r.pmf.get(1), 0.25, 1e-14));
        assert!(close(r.mixture.mass(), 1.0, 1e-14));
        assert!(r.certificate.passed);

        let r = fit(&emp(&[0, 0, 1, 2]), &cfg).unwrap();
        let want = [0.5, 7.0 / 24.0, 1.0 / 6.0, 1.0 / 24.0];
        assert_eq!(r.pmf.probs().len(), 4);
        for (i, w) in want.iter().enumerate() {
            assert!(close(r.pmf.get(i), *w, 1e-12));
        }
        assert!(r.certificate.passed, "{:?}", r.certificate);

        // a single observation at 7 projects onto T_22, whose mean is 7
        let r = fit(&emp(&[7]), &cfg).unwrap();
        assert!(close(r.mixture.mass(), 1.0, 1e-8));
        for i in 0..25 {
            assert!(close(r.pmf.get(i), tri(22, i), 1e-9), "i = {i}");
        }
        assert!(close(r.pmf.mean(), 7.0, 1e-8));
        assert!(r.certificate.passed, "{:?}", r.certificate);
    }

    #[test]
    fn degenerate_point_mass() {
        let r = fit(&emp(&[0, 0, 0]), &SolverConfig::default()).unwrap();
        assert_eq!(r.pmf.probs(), &[1.0]);
        assert_eq!(r.mixture.support(), vec![1]);
        assert_eq!(r.final_l, 1);
        assert!(r.certificate.passed);
    }

    #[test]
    fn trace_is_monotone() {
        let pt = emp(&[0, 0, 1, 1, 1, 3, 4, 4, 9, 12, 12, 12]);
        let r = fit(&pt, &SolverConfig::default()).unwrap();
        for w in r.trace.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-14, "{w:?}");
        }
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            d_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(fit(&emp(&[0, 1]), &bad).is_err());
        let bad = SolverConfig {
            max_outer: 0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn outer_cap_is_reported() {
        let cfg = SolverConfig {
            max_outer: 1,
            ..SolverConfig::default()
        };
        match fit(&emp(&[7]), &cfg) {
            Err(Error::OuterCapExceeded { mass, .. }) => assert!(mass < 1.0),
            other => panic!("expected OuterCapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn growth_schedule() {
        assert_eq!(LGrowth::HalfStep.next(1), 2);
        assert_eq!(LGrowth::HalfStep.next(2), 3);
        assert_eq!(LGrowth::HalfStep.next(3), 5);
        assert_eq!(LGrowth::HalfStep.next(8), 12);
        assert_eq!(LGrowth::Additive(0).next(4), 5);
    }
}
