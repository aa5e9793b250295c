//! A reduced version of the Monte Carlo study over the nine design
//! truths. Writes a tidy CSV to stdout.
//!
//! Run with `cargo run --release --example simulation_study [replicates]`.
//! Set `CONVEXPMF_THREADS` to cap parallelism.

use convexpmf::sim::{design_grid, rows_to_csv, run_campaign, Estimator, Functional};

fn main() {
    let replicates = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let campaign = run_campaign(&design_grid(replicates, 2009));
    for f in &campaign.failures {
        eprintln!("{}: {}", f.distribution, f.error);
    }

    eprintln!("{:>10} {:>5} {:>12} {:>12} {:>9}", "truth", "n", "l2 p~", "l2 p^", "nonconvex");
    for r in &campaign.results {
        for s in &r.sizes {
            let v = |e| r.value(s.n, e, Functional::L2).unwrap_or(f64::NAN);
            eprintln!(
                "{:>10} {:>5} {:>12.3e} {:>12.3e} {:>9.2}",
                r.spec.distribution.to_string(),
                s.n,
                v(Estimator::Empirical),
                v(Estimator::Constrained),
                s.nonconvex_fraction
            );
        }
    }
    print!("{}", rows_to_csv(&campaign.rows()));
}
