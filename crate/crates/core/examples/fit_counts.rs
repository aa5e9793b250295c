//! Fit the convex least-squares estimator to a small count sample and
//! print the solver trace.
//!
//! Run with `cargo run --example fit_counts`.

use convexpmf::{fit, EmpiricalPmf, Result, SolverConfig};

fn main() -> Result<()> {
    // counts of some small-integer quantity, value -> frequency
    let ptilde = EmpiricalPmf::from_counts(&[(0, 31), (1, 22), (2, 17), (3, 6), (4, 9), (5, 2), (7, 3), (9, 1)])?;
    println!("n = {}, empirical convex: {}", ptilde.n(), ptilde.is_convex().convex);

    let result = fit(&ptilde, &SolverConfig::default())?;
    println!("final L = {}, objective = {:.10}", result.final_l, result.objective);
    println!("{:>3} {:>10} {:>10}", "i", "p~", "p^");
    for i in 0..result.pmf.probs().len().max(ptilde.probs().len()) {
        println!("{i:>3} {:>10.6} {:>10.6}", ptilde.get(i), result.pmf.get(i));
    }
    println!("mixture: {:?}", result.mixture.weights());

    println!("\ntrace (L, iteration, |S|, objective):");
    for t in &result.trace {
        println!("  {:>3} {:>3} {:>3} {:.12}", t.l, t.iteration, t.active_size, t.objective);
    }
    Ok(())
}
