//! Sampling from the study distributions, and where Poisson pmfs stop
//! being convex.
//!
//! Run with `cargo run --example poisson_threshold`.

use convexpmf::distributions::{TrueDistribution, POISSON_CONVEXITY_THRESHOLD};
use convexpmf::pmf::is_convex;
use convexpmf::tolerances::CONVEXITY_TOL;
use convexpmf::Result;

fn main() -> Result<()> {
    println!("threshold 2 - sqrt(2) = {POISSON_CONVEXITY_THRESHOLD:.12}");
    for lambda in [0.5, POISSON_CONVEXITY_THRESHOLD - 1e-6, POISSON_CONVEXITY_THRESHOLD + 1e-6, 0.59, 0.8, 1.0] {
        let p = TrueDistribution::poisson(lambda)?.materialize()?;
        let check = is_convex(p.probs(), CONVEXITY_TOL);
        println!(
            "pois:{lambda:<18} convex {:<5} min second difference {:+.3e}",
            check.convex, check.min_second_difference
        );
    }

    for spec in ["geom:0.5", "tri:5", "pois:0.8"] {
        let d: TrueDistribution = spec.parse()?;
        let xs = d.sample(20, 1)?;
        println!("{spec:>8}: {xs:?}");
    }
    Ok(())
}
