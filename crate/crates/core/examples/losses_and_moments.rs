//! Distances between estimates and the truth, and the moment relations
//! between the empirical and the constrained estimator.
//!
//! Run with `cargo run --example losses_and_moments`.

use convexpmf::distributions::TrueDistribution;
use convexpmf::{fit, losses, moments, EmpiricalPmf, Result, SolverConfig};

fn main() -> Result<()> {
    let truth = TrueDistribution::geometric(0.3)?;
    let p0 = truth.materialize()?;
    let xs = truth.sample(60, 4)?;
    let ptilde = EmpiricalPmf::from_samples(&xs)?;
    let phat = fit(&ptilde, &SolverConfig::default())?.pmf;

    for (name, est) in [("empirical", ptilde.pmf()), ("constrained", &phat)] {
        let l = losses(est, &p0);
        println!(
            "{name:>11}: l2 {:.5}  kolmogorov {:.5}  hellinger {:.5}  tv {:.5}",
            l.l2, l.kolmogorov, l.hellinger, l.total_variation
        );
    }

    let center = ptilde.pmf().mean().floor();
    let (mt, mh) = (moments(ptilde.pmf(), center, 3), moments(&phat, center, 3));
    println!("\nmean       {:.10} vs {:.10}", mt.mean, mh.mean);
    println!("p(0)       {:.6} vs {:.6}", mt.p0, mh.p0);
    println!("variance   {:.6} vs {:.6}", mt.variance, mh.variance);
    println!("entropy    {:.6} vs {:.6}", mt.entropy, mh.entropy);
    for u in 1..=3 {
        println!("|i-{center}|^{u}  {:.6} vs {:.6}", mt.centered_moments[&u], mh.centered_moments[&u]);
    }
    Ok(())
}
