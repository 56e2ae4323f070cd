// Seeded counterexample search. A found witness replays deterministically;
// finding nothing is evidence, not proof.

use hpye::axioms::{check_axiom, AxiomId, AxiomVerdict};
use hpye::{fixtures, EvalSpec, Result};

/// Searches two axioms that fail and one that holds.
pub fn run_example() -> Result<Vec<AxiomVerdict>> {
    let paly = EvalSpec::power_paly(0.5)?.with_value_set(fixtures::value_set())?;
    let utilitarian = fixtures::utilitarian_identity();
    let runs = [
        (AxiomId::Pi, &paly),
        (AxiomId::Zero, &paly),
        (AxiomId::Pdtfhp, &utilitarian),
    ];
    let mut verdicts = Vec::new();
    for (axiom, spec) in runs {
        let v = check_axiom(axiom, spec, 1_000, 42)?;
        println!("{:<20} {v}", spec.describe());
        if let Some(w) = &v.counterexample {
            assert!(w.replay(spec)?.violated);
        }
        verdicts.push(v);
    }
    Ok(verdicts)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
