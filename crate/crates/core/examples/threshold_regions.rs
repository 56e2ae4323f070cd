// Where along gamma is Omega weakly preferred to Phi?

use hpye::threshold::{solve, Region};
use hpye::{example1, EvalSpec, FreeParam, GapFunction, Result, SolverOptions};

/// Regions for PowerQALY and PowerPALY with `p = 1/sqrt(2)`.
pub fn run_example() -> Result<Vec<Region>> {
    let p = std::f64::consts::FRAC_1_SQRT_2;
    let specs = [
        EvalSpec::power_qaly(0.5, example1::value_set())?,
        EvalSpec::power_paly(0.5)?,
    ];
    let mut regions = Vec::new();
    for spec in specs {
        let label = spec.kind();
        let gf = GapFunction::new(example1::omega(), example1::phi(p), spec, FreeParam::Gamma)?;
        let region = solve(&gf, SolverOptions::default())?;
        println!("{label}: gamma in {}", region.set);
        for root in &region.roots {
            println!("  root {:.12} ({:?})", root.theta, root.kind);
        }
        regions.push(region);
    }
    Ok(regions)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
