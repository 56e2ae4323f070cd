// How much more one extra year is worth to someone with a short life,
// under the power families with `0 < gamma < 1`.

use hpye::eval::{bounded_gain_check, marginal_priority_ratio};
use hpye::Result;

/// `(ratio, gain)`: the marginal priority of a 5-year life over a 40-year
/// life at `gamma = 0.5`, and the value of adding 10 years to a 5-year life.
pub fn run_example() -> Result<(f64, f64)> {
    let ratio = marginal_priority_ratio(5.0, 40.0, 0.5)?;
    println!("a year at t=5 counts {ratio:.4} times a year at t=40");
    for gamma in [0.1, 0.5, 0.9] {
        let r = marginal_priority_ratio(5.0, 40.0, gamma)?;
        println!("  gamma={gamma}: {r:.4}");
    }
    let gain = bounded_gain_check(5.0, 10.0, 0.5)?;
    println!("value of 10 more years at t=5: {gain:.4}");
    Ok((ratio, gain))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
