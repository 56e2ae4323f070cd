// Full reproduction of the worked example, computed values next to the
// published rounded ones. Same output as `hpye example1`.

use hpye::report::{example1_report, Example1Report};
use hpye::{Result, SolverOptions};

pub fn run_example() -> Result<Example1Report> {
    let report = example1_report(SolverOptions::default())?;
    print!("{report}");
    Ok(report)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
