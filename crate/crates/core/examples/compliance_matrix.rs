// The family by axiom compliance matrix over the built-in fixtures.
// The CLI runs the same search with `hpye axioms --matrix`.

use hpye::axioms::{table1_matrix, AxiomId, Matrix};
use hpye::{fixtures, Result};

pub fn run_example() -> Result<Matrix> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let m = table1_matrix(&fixtures::table1_specs(), &AxiomId::ALL, trials, 42)?;
    print!("{m}");
    Ok(m)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
