//! Losses and functionals comparing pmfs, and the optimality certificate
//! for fitted convex pmfs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pmf::{
    combine_basis, cumulative_h_seq, mixture_to_pmf, second_difference, tri, EmpiricalPmf, Pmf,
    TriangularMixture,
};
use crate::solver::FitResult;
use crate::tolerances::{CertifyTolerances, CERTIFICATE_LOOKAHEAD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub l2: f64,
    pub kolmogorov: f64,
    pub hellinger: f64,
    pub total_variation: f64,
}

/// Squared l2, Kolmogorov, Hellinger and total-variation distances
/// between two pmfs, summed over the union of their supports.
pub fn losses(p: &Pmf, q: &Pmf) -> LossReport {
    let len = p.probs().len().max(q.probs().len());
    let (mut l2, mut hellinger, mut tv, mut kolmogorov) = (0.0, 0.0, 0.0, 0.0f64);
    let (mut cdf_p, mut cdf_q) = (0.0, 0.0);
    // one extra index so the sup covers max(support) + 1
    for i in 0..=len {
        let (a, b) = (p.get(i), q.get(i));
        l2 += (a - b) * (a - b);
        hellinger += (a.sqrt() - b.sqrt()).powi(2);
        tv += (a - b).abs();
        cdf_p += a;
        cdf_q += b;
        kolmogorov = kolmogorov.max((cdf_p - cdf_q).abs());
    }
    LossReport {
        l2,
        kolmogorov,
        hellinger: 0.5 * hellinger,
        total_variation: 0.5 * tv,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    pub center: f64,
    /// `u -> sum_i |i - center|^u p(i)`.
    pub centered_moments: BTreeMap<u32, f64>,
    /// Shannon entropy in nats.
    pub entropy: f64,
    pub p0: f64,
}

/// Shannon entropy in nats with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

pub fn variance(p: &Pmf) -> f64 {
    let mean = p.mean();
    p.probs()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 - mean).powi(2) * v)
        .sum()
}

/// `sum_i |i - center|^u p(i)`.
pub fn centered_absolute_moment(p: &Pmf, center: f64, u: u32) -> f64 {
    p.probs()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 - center).abs().powi(u as i32) * v)
        .sum()
}

pub fn moments(p: &Pmf, center: f64, u_max: u32) -> MomentReport {
    MomentReport {
        mean: p.mean(),
        variance: variance(p),
        center,
        centered_moments: (1..=u_max).map(|u| (u, centered_absolute_moment(p, center, u))).collect(),
        entropy: entropy(p.probs()),
        p0: p.get(0),
    }
}

/// Result of checking a candidate fit against the optimality conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    /// Smallest `d_j` over indices outside the support (up to `final_L` plus lookahead).
    pub dj_min_off_support: f64,
    /// Largest `|d_j|` over the support.
    pub dj_max_abs_on_support: f64,
    /// `min_l (H_fit(l - 1) - H_emp(l - 1))`.
    pub h_min_slack: f64,
    /// Largest `|H_fit(l - 1) - H_emp(l - 1)|` at changes of slope.
    pub h_equality_residual_at_kinks: f64,
    pub mass_residual: f64,
    /// Largest gap between the stored pmf and the pmf rebuilt from the mixture.
    pub consistency_residual: f64,
    /// Change-of-slope points of the fitted pmf.
    pub kinks: Vec<usize>,
    pub structure_ok: bool,
    pub passed: bool,
    /// Names of the violated conditions; empty when `passed`.
    pub violations: Vec<String>,
}

/// Certifies a fit produced by any solver.
pub fn certify(fit: &FitResult, ptilde: &EmpiricalPmf, tol: &CertifyTolerances) -> CertificateReport {
    certify_parts(&fit.mixture, &fit.pmf, fit.final_l, ptilde, tol)
}

pub(crate) fn certify_parts(
    mixture: &TriangularMixture,
    pmf: &Pmf,
    final_l: usize,
    ptilde: &EmpiricalPmf,
    tol: &CertifyTolerances,
) -> CertificateReport {
    let mut violations = Vec::new();
    let p = pmf.probs();

    // directional derivatives, summed directly from their definition
    let jmax = final_l.max(mixture.max_index().unwrap_or(0)) + CERTIFICATE_LOOKAHEAD;
    let f = combine_basis(mixture.iter(), jmax);
    let mut dj_min_off_support = f64::INFINITY;
    let mut dj_max_abs_on_support = 0.0f64;
    for j in 1..=jmax {
        let d: f64 = (0..j).map(|l| tri(j, l) * (f[l] - ptilde.get(l))).sum();
        if mixture.get(j) > 0.0 {
            dj_max_abs_on_support = dj_max_abs_on_support.max(d.abs());
        } else {
            dj_min_off_support = dj_min_off_support.min(d);
        }
    }
    if dj_min_off_support < -tol.d_tol {
        violations.push(format!("negative directional derivative ({dj_min_off_support:e})"));
    }
    if dj_max_abs_on_support > tol.d_tol {
        violations.push(format!("nonzero directional derivative on support ({dj_max_abs_on_support:e})"));
    }

    // H-characterization on the stored pmf
    let s_hat = pmf.support_max();
    let s_tilde = ptilde.max_observed();
    let hlen = s_hat.max(s_tilde) + 2 + CERTIFICATE_LOOKAHEAD;
    let h_fit = cumulative_h_seq(p, hlen);
    let h_emp = cumulative_h_seq(ptilde.probs(), hlen);
    let h_min_slack = h_fit
        .iter()
        .zip(&h_emp)
        .map(|(a, b)| a - b)
        .fold(f64::INFINITY, f64::min);
    let kinks: Vec<usize> = (1..=s_hat + 1)
        .filter(|&l| second_difference(p, l) > tol.kink)
        .collect();
    let h_equality_residual_at_kinks = kinks
        .iter()
        .map(|&l| (h_fit[l - 1] - h_emp[l - 1]).abs())
        .fold(0.0, f64::max);
    if h_min_slack < -tol.h_slack {
        violations.push(format!("H slack negative ({h_min_slack:e})"));
    }
    if h_equality_residual_at_kinks > tol.h_equality {
        violations.push(format!("H equality fails at a kink ({h_equality_residual_at_kinks:e})"));
    }

    let mass_residual = (p.iter().sum::<f64>() - 1.0).abs();
    if mass_residual > tol.mass {
        violations.push(format!("mass residual {mass_residual:e}"));
    }

    let rebuilt = mixture_to_pmf(mixture);
    let consistency_residual = (0..rebuilt.len().max(p.len()))
        .map(|i| (rebuilt.get(i).copied().unwrap_or(0.0) - pmf.get(i)).abs())
        .fold(0.0, f64::max);
    if consistency_residual > tol.consistency {
        violations.push(format!("pmf does not match its mixture ({consistency_residual:e})"));
    }

    // round-off tails of size ~1e-15 must not move the support end
    let s_hat_numeric = p.iter().rposition(|&v| v > tol.kink).unwrap_or(0);
    let structure = structure_issues(&kinks, s_hat_numeric, ptilde);
    let structure_ok = structure.is_empty();
    violations.extend(structure);

    CertificateReport {
        dj_min_off_support,
        dj_max_abs_on_support,
        h_min_slack,
        h_equality_residual_at_kinks,
        mass_residual,
        consistency_residual,
        kinks,
        structure_ok,
        passed: violations.is_empty(),
        violations,
    }
}

/// Piecewise-linear shape the estimator must have: linear up to one past
/// the smallest observation and from the largest observation minus one to
/// its own support end, and at most two (adjacent) slope changes strictly
/// between consecutive observations.
fn structure_issues(kinks: &[usize], s_hat: usize, ptilde: &EmpiricalPmf) -> Vec<String> {
    let mut issues = Vec::new();
    let s_tilde = ptilde.max_observed();
    if s_hat < s_tilde {
        issues.push(format!("structure: support end {s_hat} below largest observation {s_tilde}"));
    }
    let first = ptilde.min_observed();
    if let Some(k) = kinks.iter().find(|&&k| k <= first) {
        issues.push(format!("structure: slope change at {k} inside the initial linear stretch"));
    }
    if let Some(k) = kinks.iter().find(|&&k| k >= s_tilde.max(1) && k < s_hat) {
        issues.push(format!("structure: slope change at {k} inside the final linear stretch"));
    }
    // vacuous with fewer than two distinct observations
    for w in ptilde.distinct_values().windows(2) {
        let inside: Vec<usize> = kinks.iter().copied().filter(|&k| k > w[0] && k < w[1]).collect();
        let ok = match inside.as_slice() {
            [] | [_] => true,
            [a, b] => b - a == 1,
            _ => false,
        };
        if !ok {
            issues.push(format!(
                "structure: slope changes {inside:?} between observations {} and {}",
                w[0], w[1]
            ));
        }
    }
    issues
}
