//! Convex pmfs and their triangular-mixture coordinates.
//!
//! Run with `cargo run --example triangular_basis`.

use convexpmf::pmf::triangular_value;
use convexpmf::{mixture_to_pmf, pmf_to_mixture, Result, TriangularMixture};

fn main() -> Result<()> {
    for j in 1..=4 {
        let row: Vec<String> = (0..=4)
            .map(|i| triangular_value(j, i).map(|v| format!("{v:.4}")))
            .collect::<Result<_>>()?;
        println!("T_{j}: {}", row.join(" "));
    }

    let pi = TriangularMixture::from_pairs(&[(1, 0.2), (3, 0.5), (6, 0.3)])?;
    let f = mixture_to_pmf(&pi);
    println!("\nmixture {:?}", pi.weights());
    println!("pmf     {f:.4?}");
    println!("mass    {:.12}", f.iter().sum::<f64>());

    // second differences recover the weights
    let back = pmf_to_mixture(&f)?;
    for (j, w) in back.iter() {
        println!("pi_{j} = {w:.12}");
    }
    Ok(())
}
