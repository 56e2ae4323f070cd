// Evaluates the two worked-example distributions under every family.

use hpye::{compare, evaluate, example1, Result};

/// `(family, E[Omega], E[Phi])` for each family at `gamma = p = 0.5`.
pub fn run_example() -> Result<Vec<(String, f64, f64)>> {
    let (omega, phi) = (example1::omega(), example1::phi(0.5));
    let mut rows = Vec::new();
    for spec in example1::all_families(0.5) {
        let (a, b) = (evaluate(&omega, &spec)?, evaluate(&phi, &spec)?);
        let ranking = compare(&omega, &phi, &spec)?;
        println!(
            "{:<45} {a:>10.5} {b:>10.5}   {}",
            spec.describe(),
            ranking.verdict
        );
        rows.push((spec.kind().to_string(), a, b));
    }
    Ok(rows)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
