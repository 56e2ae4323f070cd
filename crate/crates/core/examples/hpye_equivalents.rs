// Every profile has a healthy productive years equivalent: the lifetime
// at full health and productivity that the family values the same.
// Replacing each profile by it leaves the evaluation unchanged.

use hpye::eval::hpye;
use hpye::{evaluate, example1, hpye_equivalent, Result};

/// Largest relative change of `E` caused by the replacement, over all families.
pub fn run_example() -> Result<f64> {
    let d = example1::phi(0.5);
    let mut worst: f64 = 0.0;
    for spec in example1::all_families(0.5) {
        let years = d
            .iter()
            .map(|p| hpye(p, &spec).map(|h| h.years()))
            .collect::<Result<Vec<_>>>()?;
        let (e, e_star) = (
            evaluate(&d, &spec)?,
            evaluate(&hpye_equivalent(&d, &spec)?, &spec)?,
        );
        let rel = (e - e_star).abs() / e.abs().max(1.0);
        worst = worst.max(rel);
        println!("{:<45} hpye = {years:.4?}", spec.describe());
    }
    println!("largest relative difference: {worst:e}");
    Ok(worst)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
