//! Check a fit against the optimality conditions, then show that a
//! slightly perturbed mixture is rejected.
//!
//! Run with `cargo run --example certify_fit`.

use convexpmf::{certify, fit, mixture_to_pmf, CertifyTolerances, EmpiricalPmf, Pmf, Result, SolverConfig};
use convexpmf::TriangularMixture;

fn main() -> Result<()> {
    let ptilde = EmpiricalPmf::from_samples(&[0u32, 0, 1, 2, 2, 5, 6, 9])?;
    let tol = CertifyTolerances::default();
    let mut result = fit(&ptilde, &SolverConfig::default())?;

    let report = certify(&result, &ptilde, &tol);
    println!("fit:       passed = {}, kinks = {:?}", report.passed, report.kinks);
    println!("           min d_j off support = {:e}", report.dj_min_off_support);
    println!("           min H slack         = {:e}", report.h_min_slack);

    // shift a little mass from the first component to its neighbour
    let mut weights = result.mixture.weights().clone();
    let (&j, &w) = weights.iter().next().expect("nonempty mixture");
    let delta = (0.01f64).min(w);
    weights.insert(j, w - delta);
    *weights.entry(j + 1).or_insert(0.0) += delta;
    result.mixture = TriangularMixture::new(weights)?;
    result.pmf = Pmf::new(mixture_to_pmf(&result.mixture))?;

    let report = certify(&result, &ptilde, &tol);
    println!("perturbed: passed = {}", report.passed);
    for v in &report.violations {
        println!("           {v}");
    }
    Ok(())
}
