//! Compare the support reduction solver with the dense NNLS reference on
//! random samples.
//!
//! Run with `cargo run --release --example oracle_crosscheck`.

use std::time::Instant;

use convexpmf::oracle::oracle_fit;
use convexpmf::{fit, EmpiricalPmf, Result, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut worst, mut t_sra, mut t_nnls) = (0.0f64, 0.0, 0.0);
    let trials = 200;
    for _ in 0..trials {
        let n = rng.random_range(1..=100);
        let top = rng.random_range(0..=30usize);
        let xs: Vec<usize> = (0..n).map(|_| rng.random_range(0..=top)).collect();
        let p = EmpiricalPmf::from_samples(&xs)?;

        let t = Instant::now();
        let a = fit(&p, &SolverConfig::default())?;
        t_sra += t.elapsed().as_secs_f64();
        let t = Instant::now();
        let b = oracle_fit(&p)?;
        t_nnls += t.elapsed().as_secs_f64();

        for i in 0..a.pmf.probs().len().max(b.pmf.probs().len()) {
            worst = worst.max((a.pmf.get(i) - b.pmf.get(i)).abs());
        }
    }
    println!("{trials} samples: max |p^_sra - p^_nnls| = {worst:.3e}");
    println!("time: support reduction {:.3} s, NNLS {:.3} s", t_sra, t_nnls);
    Ok(())
}
