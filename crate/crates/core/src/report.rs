//! Self-contained reproduction of the worked example: both preference
//! regions over gamma and the four comparisons at `gamma = p = 0.5`,
//! each printed next to the rounded published value.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::eval::compare;
use crate::example1::{omega, phi, value_set};
use crate::model::{Ranking, Verdict};
use crate::spec::{EvalSpec, FreeParam};
use crate::threshold::{solve, GapFunction, Region, SolverOptions};

/// Productivity of the varying individual in the gamma regions.
pub const P_REGIONS: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Productivity and gamma of the family comparisons.
pub const P_COMPARISONS: f64 = 0.5;
pub const GAMMA_COMPARISONS: f64 = 0.5;
/// Number of interior epsilon points checked for the bi-power family.
pub const EPSILON_GRID: usize = 99;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    /// Region of the free parameter on which Omega is weakly preferred.
    Region(Region),
    /// A single comparison of Omega against Phi.
    Comparison(Ranking),
    /// Smallest gap over a parameter grid.
    GridMinimum {
        param: FreeParam,
        points: usize,
        min_gap: f64,
        argmin: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportLine {
    pub family: String,
    pub setting: String,
    pub finding: Finding,
    /// Rounded published result.
    pub published: &'static str,
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let computed = match &self.finding {
            Finding::Region(r) => format!("{} in {}", r.param, r.set),
            Finding::Comparison(r) => r.to_string(),
            Finding::GridMinimum {
                param,
                points,
                min_gap,
                argmin,
            } => format!("min gap over {points} {param} points = {min_gap:.5} at {param}={argmin}"),
        };
        write!(
            f,
            "{:<13} {:<23} {computed}\n{:37} paper: {}",
            self.family, self.setting, "", self.published
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example1Report {
    pub lines: Vec<ReportLine>,
}

impl fmt::Display for Example1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Omega versus Phi, q(11211) = 0.95; regions where Omega is weakly preferred"
        )?;
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn region(spec: EvalSpec, p: f64, param: FreeParam, opts: SolverOptions) -> Result<Finding> {
    let gf = GapFunction::new(omega(), phi(p), spec, param)?;
    Ok(Finding::Region(solve(&gf, opts)?))
}

/// Builds the full report. Deterministic for fixed solver options.
pub fn example1_report(opts: SolverOptions) -> Result<Example1Report> {
    let vs = value_set();
    let g = GAMMA_COMPARISONS;
    let p = P_COMPARISONS;
    let regions = "p=1/sqrt(2)".to_string();
    let comparisons = format!("gamma=p={g}");

    let pqaly = EvalSpec::power_pqaly(g, vs.clone())?;
    let bipower = EvalSpec::bi_power_pqaly(g, 0.5, vs.clone())?;
    let (min_gap, argmin) = (1..=EPSILON_GRID)
        .map(|k| {
            let eps = k as f64 / (EPSILON_GRID + 1) as f64;
            let spec = bipower.with_param(FreeParam::Epsilon, eps)?;
            Ok((compare(&omega(), &phi(p), &spec)?.gap, eps))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(
            (f64::INFINITY, f64::NAN),
            |acc, x| if x.0 < acc.0 { x } else { acc },
        );

    let lines = vec![
        ReportLine {
            family: "PowerQALY".into(),
            setting: regions.clone(),
            finding: region(
                EvalSpec::power_qaly(0.5, vs.clone())?,
                P_REGIONS,
                FreeParam::Gamma,
                opts,
            )?,
            published: "(0,0.32] U [0.68,1)",
        },
        ReportLine {
            family: "PowerPALY".into(),
            setting: regions,
            finding: region(
                EvalSpec::power_paly(0.5)?,
                P_REGIONS,
                FreeParam::Gamma,
                opts,
            )?,
            published: "(0,0.5]",
        },
        ReportLine {
            family: "PowerPQALY".into(),
            setting: comparisons.clone(),
            finding: Finding::Comparison(compare(&omega(), &phi(p), &pqaly)?),
            published: "Omega weakly preferred",
        },
        ReportLine {
            family: "QalyPaly".into(),
            setting: comparisons.clone(),
            finding: region(
                EvalSpec::qaly_paly(g, 0.5, vs.clone())?,
                p,
                FreeParam::Sigma,
                opts,
            )?,
            published: "[0,0.90]",
        },
        ReportLine {
            family: "QalyPqaly".into(),
            setting: format!("{comparisons}, r=delta q"),
            finding: region(
                EvalSpec::qaly_pqaly(g, vs.with_convex_split(0.5)?)?,
                p,
                FreeParam::Delta,
                opts,
            )?,
            published: "(0,0.91]",
        },
        ReportLine {
            family: "BiPowerPQALY".into(),
            setting: comparisons.clone(),
            finding: region(bipower, p, FreeParam::Epsilon, opts)?,
            published: "(0,1)",
        },
        ReportLine {
            family: "BiPowerPQALY".into(),
            setting: comparisons,
            finding: Finding::GridMinimum {
                param: FreeParam::Epsilon,
                points: EPSILON_GRID,
                min_gap,
                argmin,
            },
            published: "Omega preferred for all 0<epsilon<1",
        },
    ];
    Ok(Example1Report { lines })
}

impl Example1Report {
    /// Region found for `family`, if that line is a region.
    pub fn region(&self, family: &str) -> Option<&Region> {
        self.lines.iter().find_map(|l| match &l.finding {
            Finding::Region(r) if l.family == family => Some(r),
            _ => None,
        })
    }

    /// Comparison found for `family`, if that line is a comparison.
    pub fn comparison(&self, family: &str) -> Option<&Ranking> {
        self.lines.iter().find_map(|l| match &l.finding {
            Finding::Comparison(r) if l.family == family => Some(r),
            _ => None,
        })
    }
}

/// True when the verdict is `Omega ⪰ Phi`.
pub fn omega_weakly_preferred(r: &Ranking) -> bool {
    r.verdict != Verdict::BStrictlyPreferred
}
