//! Randomized, seeded counterexample search for the axioms.
//!
//! A search that finds nothing proves nothing. Verdicts without a witness
//! are reported as "no counterexample in N trials".

mod generate;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::model::{indifference_tolerance, Distribution, Verdict};
use crate::spec::EvalSpec;

use generate::{trial_seed, Sampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum AxiomId {
    Anon,
    Sep,
    Cont,
    Zero,
    Fhps,
    Lmfhp,
    Pld,
    Pdtfhp,
    Tsifhp,
    Tsi,
    Pi,
    Hi,
    Picht,
    Pict,
    Tiup,
    Psi,
    Pdtfhct,
}

impl AxiomId {
    pub const ALL: [AxiomId; 17] = [
        AxiomId::Anon,
        AxiomId::Sep,
        AxiomId::Cont,
        AxiomId::Zero,
        AxiomId::Fhps,
        AxiomId::Lmfhp,
        AxiomId::Pld,
        AxiomId::Pdtfhp,
        AxiomId::Tsifhp,
        AxiomId::Tsi,
        AxiomId::Pi,
        AxiomId::Hi,
        AxiomId::Picht,
        AxiomId::Pict,
        AxiomId::Tiup,
        AxiomId::Psi,
        AxiomId::Pdtfhct,
    ];

    /// The axioms shared by every evaluation function in the family tree.
    pub const CORE: [AxiomId; 8] = [
        AxiomId::Anon,
        AxiomId::Sep,
        AxiomId::Cont,
        AxiomId::Zero,
        AxiomId::Fhps,
        AxiomId::Lmfhp,
        AxiomId::Pld,
        AxiomId::Pdtfhp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Anon => "ANON",
            AxiomId::Sep => "SEP",
            AxiomId::Cont => "CONT",
            AxiomId::Zero => "ZERO",
            AxiomId::Fhps => "FHPS",
            AxiomId::Lmfhp => "LMFHP",
            AxiomId::Pld => "PLD",
            AxiomId::Pdtfhp => "PDTFHP",
            AxiomId::Tsifhp => "TSIFHP",
            AxiomId::Tsi => "TSI",
            AxiomId::Pi => "PI",
            AxiomId::Hi => "HI",
            AxiomId::Picht => "PICHT",
            AxiomId::Pict => "PICT",
            AxiomId::Tiup => "TIUP",
            AxiomId::Psi => "PSI",
            AxiomId::Pdtfhct => "PDTFHCT",
        }
    }

    /// Continuity cannot be refuted by finitely many samples in general,
    /// so its verdicts are only ever heuristic.
    pub fn is_heuristic(self) -> bool {
        self == AxiomId::Cont
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

/// The inequality an instance asserts about the evaluation function.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// `left ~ right`.
    Indifferent {
        left: Distribution,
        right: Distribution,
    },
    /// `better ≿ worse`.
    WeaklyPreferred {
        better: Distribution,
        worse: Distribution,
    },
    /// `better ≻ worse` by more than the tolerance.
    StrictlyPreferred {
        better: Distribution,
        worse: Distribution,
    },
    /// `left` vs `right` ranks the same as `left_mapped` vs `right_mapped`.
    SameRanking {
        left: Distribution,
        right: Distribution,
        left_mapped: Distribution,
        right_mapped: Distribution,
    },
    /// Whichever side of `other` the whole sequence lies on weakly,
    /// the limit must not land strictly on the opposite side.
    Limit {
        sequence: Vec<Distribution>,
        limit: Distribution,
        other: Distribution,
    },
}

/// Outcome of evaluating one claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub violated: bool,
    /// Gaps `E(first) - E(second)` for each compared pair, in claim order.
    pub gaps: Vec<f64>,
}

fn gap_verdict(a: &Distribution, b: &Distribution, spec: &EvalSpec) -> Result<(f64, Verdict)> {
    let (ea, eb) = (evaluate(a, spec)?, evaluate(b, spec)?);
    let gap = ea - eb;
    Ok((gap, Verdict::from_gap(gap, indifference_tolerance(ea, eb))))
}

impl Claim {
    pub fn check(&self, spec: &EvalSpec) -> Result<Check> {
        let check = match self {
            Claim::Indifferent { left, right } => {
                let (gap, v) = gap_verdict(left, right, spec)?;
                Check {
                    violated: v != Verdict::Indifferent,
                    gaps: vec![gap],
                }
            }
            Claim::WeaklyPreferred { better, worse } => {
                let (gap, v) = gap_verdict(better, worse, spec)?;
                Check {
                    violated: v == Verdict::BStrictlyPreferred,
                    gaps: vec![gap],
                }
            }
            Claim::StrictlyPreferred { better, worse } => {
                let (gap, v) = gap_verdict(better, worse, spec)?;
                Check {
                    violated: v != Verdict::AStrictlyPreferred,
                    gaps: vec![gap],
                }
            }
            Claim::SameRanking {
                left,
                right,
                left_mapped,
                right_mapped,
            } => {
                let (g1, v1) = gap_verdict(left, right, spec)?;
                let (g2, v2) = gap_verdict(left_mapped, right_mapped, spec)?;
                Check {
                    violated: v1 != v2,
                    gaps: vec![g1, g2],
                }
            }
            Claim::Limit {
                sequence,
                limit,
                other,
            } => {
                let verdicts = sequence
                    .iter()
                    .map(|d| gap_verdict(d, other, spec).map(|(_, v)| v))
                    .collect::<Result<Vec<_>>>()?;
                let (gap, v) = gap_verdict(limit, other, spec)?;
                let above = verdicts.iter().all(|&w| w != Verdict::BStrictlyPreferred);
                let below = verdicts.iter().all(|&w| w != Verdict::AStrictlyPreferred);
                Check {
                    violated: (above && v == Verdict::BStrictlyPreferred)
                        || (below && v == Verdict::AStrictlyPreferred),
                    gaps: vec![gap],
                }
            }
        };
        Ok(check)
    }
}

/// A stored counterexample. Replaying `claim` against the same spec
/// reproduces the violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Zero-based index of the violating trial.
    pub trial: u64,
    /// Seed of the violating trial's private stream.
    pub trial_seed: u64,
    /// Drawn witnesses such as the chosen indices, τ, ρ or c.
    pub detail: String,
    pub claim: Claim,
    pub gaps: Vec<f64>,
}

impl Witness {
    /// Re-evaluates the stored claim.
    pub fn replay(&self, spec: &EvalSpec) -> Result<Check> {
        self.claim.check(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    NoCounterexampleFound,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: AxiomId,
    pub outcome: Outcome,
    /// Trials requested.
    pub trials: u64,
    pub counterexample: Option<Witness>,
    pub seed: u64,
    pub heuristic: bool,
}

impl AxiomVerdict {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::NoCounterexampleFound
    }

    /// Short matrix cell: `YES`, `NO`, or `heuristic-pass` for continuity.
    pub fn cell(&self) -> &'static str {
        match (self.outcome, self.heuristic) {
            (Outcome::Counterexample, _) => "NO",
            (Outcome::NoCounterexampleFound, true) => "heuristic-pass",
            (Outcome::NoCounterexampleFound, false) => "YES",
        }
    }
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            Some(w) => write!(
                f,
                "{}: counterexample at trial {} of {} (seed {}; {}; gaps {:?})",
                self.axiom, w.trial, self.trials, self.seed, w.detail, w.gaps
            ),
            None if self.heuristic => write!(
                f,
                "{}: heuristic-pass, no counterexample in {} trials (seed {})",
                self.axiom, self.trials, self.seed
            ),
            None => write!(
                f,
                "{}: no counterexample in {} trials (seed {})",
                self.axiom, self.trials, self.seed
            ),
        }
    }
}

/// Searches `trials` seeded instances for a violation of `axiom`.
///
/// Trials run in parallel but the reported witness is always the one with
/// the smallest trial index, so the verdict depends only on the inputs.
pub fn check_axiom(
    axiom: AxiomId,
    spec: &EvalSpec,
    trials: u64,
    seed: u64,
) -> Result<AxiomVerdict> {
    spec.validate()?;
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: 0.0,
            reason: "at least one trial is required",
        });
    }
    let states = spec.states();
    let star = spec.full_health();
    if axiom == AxiomId::Hi && states.len() < 2 {
        return Err(Error::UnsupportedAxiomForFamily {
            axiom: axiom.to_string(),
            family: spec.kind().name().to_string(),
            reason: "HI needs at least two health states in the table",
        });
    }

    let found = (0..trials).into_par_iter().find_map_first(|trial| {
        let s = trial_seed(seed, axiom, trial);
        let run = || -> Result<Option<Witness>> {
            let Some(inst) = Sampler::new(s, &states, &star).instance(axiom)? else {
                return Ok(None);
            };
            let check = inst.claim.check(spec)?;
            Ok(check.violated.then_some(Witness {
                trial,
                trial_seed: s,
                detail: inst.detail,
                claim: inst.claim,
                gaps: check.gaps,
            }))
        };
        run().transpose()
    });

    let counterexample = found.transpose()?;
    Ok(AxiomVerdict {
        axiom,
        outcome: if counterexample.is_some() {
            Outcome::Counterexample
        } else {
            Outcome::NoCounterexampleFound
        },
        trials,
        counterexample,
        seed,
        heuristic: axiom.is_heuristic(),
    })
}

/// Verdicts for every (axiom, spec) pair. Rows are axioms, columns specs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix {
    pub columns: Vec<String>,
    pub axioms: Vec<AxiomId>,
    pub cells: Vec<Vec<AxiomVerdict>>,
}

impl Matrix {
    pub fn verdict(&self, axiom: AxiomId, column: usize) -> Option<&AxiomVerdict> {
        let row = self.axioms.iter().position(|&a| a == axiom)?;
        self.cells.get(row)?.get(column)
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const CELL: usize = 15;
        write!(f, "{:<8}", "axiom")?;
        for c in &self.columns {
            write!(f, "{c:>CELL$}")?;
        }
        writeln!(f)?;
        for (axiom, row) in self.axioms.iter().zip(&self.cells) {
            write!(f, "{:<8}", axiom.name())?;
            for v in row {
                write!(f, "{:>CELL$}", v.cell())?;
            }
            writeln!(f)?;
        }
        if let Some(trials) = self.cells.iter().flatten().map(|v| v.trials).next() {
            writeln!(
                f,
                "YES means no counterexample in {trials} trials, not a proof. \
                 CONT is sampled and reported as heuristic-pass."
            )?;
        }
        Ok(())
    }
}

/// Runs `check_axiom` for every spec and axiom.
pub fn table1_matrix(
    specs: &[EvalSpec],
    axioms: &[AxiomId],
    trials: u64,
    seed: u64,
) -> Result<Matrix> {
    let cells = axioms
        .iter()
        .map(|&axiom| {
            specs
                .iter()
                .map(|spec| check_axiom(axiom, spec, trials, seed))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix {
        columns: specs
            .iter()
            .map(|s| s.kind().symbol().to_string())
            .collect(),
        axioms: axioms.to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn names_round_trip() {
        for a in AxiomId::ALL {
            assert_eq!(a.name().parse::<AxiomId>().unwrap(), a);
        }
        assert!("NOPE".parse::<AxiomId>().is_err());
    }

    #[test]
    fn zero_holds_and_pi_fails_for_paly() {
        let paly = EvalSpec::power_paly(0.5).unwrap();
        assert!(check_axiom(AxiomId::Zero, &paly, 500, 1).unwrap().holds());
        let v = check_axiom(AxiomId::Pi, &paly, 500, 1).unwrap();
        assert!(!v.holds());
        assert!(v.counterexample.unwrap().replay(&paly).unwrap().violated);
    }

    #[test]
    fn tiup_fails_for_qaly() {
        let qaly = EvalSpec::power_qaly(0.5, fixtures::value_set()).unwrap();
        assert!(!check_axiom(AxiomId::Tiup, &qaly, 500, 3).unwrap().holds());
    }

    #[test]
    fn search_is_deterministic() {
        let spec = EvalSpec::power_pqaly(0.5, fixtures::value_set()).unwrap();
        let a = check_axiom(AxiomId::Pict, &spec, 300, 9).unwrap();
        let b = check_axiom(AxiomId::Pict, &spec, 300, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_axiom_list_gives_empty_matrix() {
        let m = table1_matrix(&fixtures::table1_specs(), &[], 10, 0).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn zero_trials_rejected() {
        let spec = EvalSpec::power_paly(0.5).unwrap();
        assert!(check_axiom(AxiomId::Anon, &spec, 0, 0).is_err());
    }
}
