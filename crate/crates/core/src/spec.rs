//! Evaluation function specifications.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{HealthStateId, ValueSet};
use crate::weights::{validate_hpye_fn, validate_weight_fn, Aggregator, HpyeFn, WeightFn};

/// Full health label used when a spec carries no value set.
pub const DEFAULT_FULL_HEALTH: &str = "11111";

/// State labels used when a spec carries no value set.
pub const DEFAULT_STATES: [&str; 5] = ["11111", "11211", "21232", "32323", "43444"];

/// Family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "GeneralizedHPYE")]
    GeneralizedHpye,
    #[serde(rename = "UtilitarianHPYE")]
    UtilitarianHpye,
    #[serde(rename = "PowerHPYE")]
    PowerHpye,
    #[serde(rename = "PQPowerLifetime")]
    PqPowerLifetime,
    #[serde(rename = "PowerQALY")]
    PowerQaly,
    #[serde(rename = "PowerPALY")]
    PowerPaly,
    #[serde(rename = "PowerPQALY")]
    PowerPqaly,
    QalyPaly,
    QalyPqaly,
    #[serde(rename = "BiPowerPQALY")]
    BiPowerPqaly,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 10] = [
        FamilyKind::GeneralizedHpye,
        FamilyKind::UtilitarianHpye,
        FamilyKind::PowerHpye,
        FamilyKind::PqPowerLifetime,
        FamilyKind::PowerQaly,
        FamilyKind::PowerPaly,
        FamilyKind::PowerPqaly,
        FamilyKind::QalyPaly,
        FamilyKind::QalyPqaly,
        FamilyKind::BiPowerPqaly,
    ];

    /// Name used in spec files.
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::GeneralizedHpye => "GeneralizedHPYE",
            FamilyKind::UtilitarianHpye => "UtilitarianHPYE",
            FamilyKind::PowerHpye => "PowerHPYE",
            FamilyKind::PqPowerLifetime => "PQPowerLifetime",
            FamilyKind::PowerQaly => "PowerQALY",
            FamilyKind::PowerPaly => "PowerPALY",
            FamilyKind::PowerPqaly => "PowerPQALY",
            FamilyKind::QalyPaly => "QalyPaly",
            FamilyKind::QalyPqaly => "QalyPqaly",
            FamilyKind::BiPowerPqaly => "BiPowerPQALY",
        }
    }

    /// Short mathematical label, e.g. `E^γq`.
    pub fn symbol(self) -> &'static str {
        match self {
            FamilyKind::GeneralizedHpye => "E^g",
            FamilyKind::UtilitarianHpye => "E^f",
            FamilyKind::PowerHpye => "E^γf",
            FamilyKind::PqPowerLifetime => "E^γφ",
            FamilyKind::PowerQaly => "E^γq",
            FamilyKind::PowerPaly => "E^γp",
            FamilyKind::PowerPqaly => "E^γpq",
            FamilyKind::QalyPaly => "E^γσ",
            FamilyKind::QalyPqaly => "E^γrs",
            FamilyKind::BiPowerPqaly => "E^γε",
        }
    }

    /// Families of the form `sum w(a, p) t^gamma` with a closed-form weight.
    pub fn is_parametric_power(self) -> bool {
        matches!(
            self,
            FamilyKind::PqPowerLifetime
                | FamilyKind::PowerQaly
                | FamilyKind::PowerPaly
                | FamilyKind::PowerPqaly
                | FamilyKind::QalyPaly
                | FamilyKind::QalyPqaly
                | FamilyKind::BiPowerPqaly
        )
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::MalformedDocument {
                locus: "family".into(),
                message: format!("unknown family {s:?}"),
            })
    }
}

/// Family together with its parameters.
#[derive(Debug, Clone)]
pub enum Family {
    /// `sum g(f(a, p, t))`.
    Generalized {
        hpye: Option<Arc<dyn HpyeFn>>,
        aggregator: Aggregator,
    },
    /// `sum f(a, p, t)`.
    Utilitarian { hpye: Option<Arc<dyn HpyeFn>> },
    /// `sum f(a, p, t)^gamma`.
    PowerHpye {
        hpye: Option<Arc<dyn HpyeFn>>,
        gamma: f64,
    },
    /// `sum phi(a, p) t^gamma`.
    PqPowerLifetime { phi: Arc<dyn WeightFn>, gamma: f64 },
    /// `sum q(a) t^gamma`.
    PowerQaly { gamma: f64 },
    /// `sum p t^gamma`.
    PowerPaly { gamma: f64 },
    /// `sum q(a) p t^gamma`.
    PowerPqaly { gamma: f64 },
    /// `sigma sum q(a) t^gamma + (1 - sigma) sum p t^gamma`.
    QalyPaly { gamma: f64, sigma: f64 },
    /// `sum r(a) t^gamma + sum s(a) p t^gamma`.
    QalyPqaly { gamma: f64 },
    /// `sum q(a) p^epsilon t^gamma`.
    BiPowerPqaly { gamma: f64, epsilon: f64 },
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Generalized { .. } => FamilyKind::GeneralizedHpye,
            Family::Utilitarian { .. } => FamilyKind::UtilitarianHpye,
            Family::PowerHpye { .. } => FamilyKind::PowerHpye,
            Family::PqPowerLifetime { .. } => FamilyKind::PqPowerLifetime,
            Family::PowerQaly { .. } => FamilyKind::PowerQaly,
            Family::PowerPaly { .. } => FamilyKind::PowerPaly,
            Family::PowerPqaly { .. } => FamilyKind::PowerPqaly,
            Family::QalyPaly { .. } => FamilyKind::QalyPaly,
            Family::QalyPqaly { .. } => FamilyKind::QalyPqaly,
            Family::BiPowerPqaly { .. } => FamilyKind::BiPowerPqaly,
        }
    }
}

/// Free parameter of a one-dimensional preference region search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeParam {
    Gamma,
    Epsilon,
    Sigma,
    /// Split weight of the convex QALY-PQALY sub-family, `r = delta q`, `s = (1 - delta) q`.
    Delta,
}

impl FreeParam {
    pub fn name(self) -> &'static str {
        match self {
            FreeParam::Gamma => "gamma",
            FreeParam::Epsilon => "epsilon",
            FreeParam::Sigma => "sigma",
            FreeParam::Delta => "delta",
        }
    }

    pub fn range(self) -> ParamRange {
        match self {
            FreeParam::Sigma => ParamRange::closed(0.0, 1.0),
            _ => ParamRange::open(0.0, 1.0),
        }
    }
}

impl fmt::Display for FreeParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FreeParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" => Ok(FreeParam::Gamma),
            "epsilon" => Ok(FreeParam::Epsilon),
            "sigma" => Ok(FreeParam::Sigma),
            "delta" => Ok(FreeParam::Delta),
            _ => Err(Error::MalformedDocument {
                locus: "--param".into(),
                message: format!("unknown parameter {s:?}"),
            }),
        }
    }
}

/// Admissible range of a parameter; each end open or closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl ParamRange {
    pub fn open(lo: f64, hi: f64) -> Self {
        ParamRange {
            lo,
            lo_closed: false,
            hi,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        ParamRange {
            lo,
            lo_closed: true,
            hi,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (if self.lo_closed {
            x >= self.lo
        } else {
            x > self.lo
        }) && (if self.hi_closed {
            x <= self.hi
        } else {
            x < self.hi
        })
    }
}

/// A fully determined evaluation function.
#[derive(Debug, Clone)]
pub struct EvalSpec {
    family: Family,
    value_set: Option<ValueSet>,
}

fn check_unit_open(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: x,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}

impl EvalSpec {
    /// Validates `family` against `value_set` and returns the spec.
    pub fn new(family: Family, value_set: Option<ValueSet>) -> Result<Self> {
        let spec = EvalSpec { family, value_set };
        spec.validate()?;
        Ok(spec)
    }

    pub fn power_qaly(gamma: f64, vs: ValueSet) -> Result<Self> {
        EvalSpec::new(Family::PowerQaly { gamma }, Some(vs))
    }

    pub fn power_paly(gamma: f64) -> Result<Self> {
        EvalSpec::new(Family::PowerPaly { gamma }, None)
    }

    pub fn power_pqaly(gamma: f64, vs: ValueSet) -> Result<Self> {
        EvalSpec::new(Family::PowerPqaly { gamma }, Some(vs))
    }

    pub fn qaly_paly(gamma: f64, sigma: f64, vs: ValueSet) -> Result<Self> {
        EvalSpec::new(Family::QalyPaly { gamma, sigma }, Some(vs))
    }

    /// `vs` must carry `r` and `s` tables.
    pub fn qaly_pqaly(gamma: f64, vs: ValueSet) -> Result<Self> {
        EvalSpec::new(Family::QalyPqaly { gamma }, Some(vs))
    }

    pub fn bi_power_pqaly(gamma: f64, epsilon: f64, vs: ValueSet) -> Result<Self> {
        EvalSpec::new(Family::BiPowerPqaly { gamma, epsilon }, Some(vs))
    }

    pub fn pq_power_lifetime(
        gamma: f64,
        phi: Arc<dyn WeightFn>,
        vs: Option<ValueSet>,
    ) -> Result<Self> {
        EvalSpec::new(Family::PqPowerLifetime { phi, gamma }, vs)
    }

    pub fn power_hpye(gamma: f64, hpye: Arc<dyn HpyeFn>, vs: Option<ValueSet>) -> Result<Self> {
        EvalSpec::new(
            Family::PowerHpye {
                hpye: Some(hpye),
                gamma,
            },
            vs,
        )
    }

    pub fn generalized(
        hpye: Arc<dyn HpyeFn>,
        aggregator: Aggregator,
        vs: Option<ValueSet>,
    ) -> Result<Self> {
        EvalSpec::new(
            Family::Generalized {
                hpye: Some(hpye),
                aggregator,
            },
            vs,
        )
    }

    pub fn utilitarian(hpye: Arc<dyn HpyeFn>, vs: Option<ValueSet>) -> Result<Self> {
        EvalSpec::new(Family::Utilitarian { hpye: Some(hpye) }, vs)
    }

    /// Attaches a value set, e.g. to give a PALY spec a state universe.
    pub fn with_value_set(self, vs: ValueSet) -> Result<Self> {
        EvalSpec::new(self.family, Some(vs))
    }

    pub fn validate(&self) -> Result<()> {
        let missing = |table| Error::MissingTable {
            family: self.kind().to_string(),
            table,
        };
        let needs_q = || {
            self.value_set
                .as_ref()
                .map(|_| ())
                .ok_or_else(|| missing("q"))
        };
        match &self.family {
            Family::Generalized { hpye, aggregator } => {
                aggregator.validate()?;
                self.check_hpye(hpye.as_deref())?;
            }
            Family::Utilitarian { hpye } => self.check_hpye(hpye.as_deref())?,
            Family::PowerHpye { hpye, gamma } => {
                check_unit_open("gamma", *gamma)?;
                self.check_hpye(hpye.as_deref())?;
            }
            Family::PqPowerLifetime { phi, gamma } => {
                check_unit_open("gamma", *gamma)?;
                validate_weight_fn(phi.as_ref(), &self.states(), &self.full_health())?;
            }
            Family::PowerPaly { gamma } => check_unit_open("gamma", *gamma)?,
            Family::PowerQaly { gamma } | Family::PowerPqaly { gamma } => {
                check_unit_open("gamma", *gamma)?;
                needs_q()?;
            }
            Family::QalyPaly { gamma, sigma } => {
                check_unit_open("gamma", *gamma)?;
                if !(0.0..=1.0).contains(sigma) {
                    return Err(Error::InvalidParameter {
                        name: "sigma",
                        value: *sigma,
                        reason: "must lie in [0, 1]",
                    });
                }
                needs_q()?;
            }
            Family::QalyPqaly { gamma } => {
                check_unit_open("gamma", *gamma)?;
                needs_q()?;
                if !self.value_set.as_ref().is_some_and(ValueSet::has_rs) {
                    return Err(missing("r/s"));
                }
            }
            Family::BiPowerPqaly { gamma, epsilon } => {
                check_unit_open("gamma", *gamma)?;
                check_unit_open("epsilon", *epsilon)?;
                needs_q()?;
            }
        }
        Ok(())
    }

    fn check_hpye(&self, hpye: Option<&dyn HpyeFn>) -> Result<()> {
        match hpye {
            Some(f) => validate_hpye_fn(f, &self.states(), &self.full_health()),
            None => Ok(()),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> FamilyKind {
        self.family.kind()
    }

    pub fn value_set(&self) -> Option<&ValueSet> {
        self.value_set.as_ref()
    }

    pub fn full_health(&self) -> HealthStateId {
        match &self.value_set {
            Some(vs) => vs.full_health().clone(),
            None => HealthStateId::new(DEFAULT_FULL_HEALTH).expect("non-empty"),
        }
    }

    /// States the spec can evaluate; the default EQ-5D-5L labels when no
    /// value set is attached.
    pub fn states(&self) -> Vec<HealthStateId> {
        match &self.value_set {
            Some(vs) => vs.states(),
            None => DEFAULT_STATES
                .iter()
                .map(|s| HealthStateId::new(*s).expect("non-empty"))
                .collect(),
        }
    }

    /// The lifetime exponent, for families that have one.
    pub fn gamma(&self) -> Option<f64> {
        match &self.family {
            Family::PowerHpye { gamma, .. }
            | Family::PqPowerLifetime { gamma, .. }
            | Family::PowerQaly { gamma }
            | Family::PowerPaly { gamma }
            | Family::PowerPqaly { gamma }
            | Family::QalyPaly { gamma, .. }
            | Family::QalyPqaly { gamma }
            | Family::BiPowerPqaly { gamma, .. } => Some(*gamma),
            Family::Generalized { .. } | Family::Utilitarian { .. } => None,
        }
    }

    /// Productivity exponent of the bi-power family.
    pub fn epsilon(&self) -> Option<f64> {
        match &self.family {
            Family::BiPowerPqaly { epsilon, .. } => Some(*epsilon),
            _ => None,
        }
    }

    /// Copy of this spec with one parameter replaced.
    pub fn with_param(&self, param: FreeParam, value: f64) -> Result<EvalSpec> {
        let unsupported = || Error::UnsupportedParameter {
            param: param.to_string(),
            family: self.kind().to_string(),
        };
        let mut family = self.family.clone();
        let mut value_set = self.value_set.clone();
        match (param, &mut family) {
            (FreeParam::Gamma, Family::PowerHpye { gamma, .. })
            | (FreeParam::Gamma, Family::PqPowerLifetime { gamma, .. })
            | (FreeParam::Gamma, Family::PowerQaly { gamma })
            | (FreeParam::Gamma, Family::PowerPaly { gamma })
            | (FreeParam::Gamma, Family::PowerPqaly { gamma })
            | (FreeParam::Gamma, Family::QalyPaly { gamma, .. })
            | (FreeParam::Gamma, Family::QalyPqaly { gamma })
            | (FreeParam::Gamma, Family::BiPowerPqaly { gamma, .. }) => *gamma = value,
            (FreeParam::Epsilon, Family::BiPowerPqaly { epsilon, .. }) => *epsilon = value,
            (FreeParam::Sigma, Family::QalyPaly { sigma, .. }) => *sigma = value,
            (FreeParam::Delta, Family::QalyPqaly { .. }) => {
                let vs = value_set.as_ref().ok_or_else(unsupported)?;
                value_set = Some(vs.with_convex_split(value)?);
            }
            _ => return Err(unsupported()),
        }
        EvalSpec::new(family, value_set)
    }

    /// Short human description, e.g. `PowerQALY(gamma=0.5)`.
    pub fn describe(&self) -> String {
        let params = match &self.family {
            Family::Generalized { aggregator, .. } => format!("g={}", aggregator.name()),
            Family::Utilitarian { .. } => String::new(),
            Family::QalyPaly { gamma, sigma } => format!("gamma={gamma}, sigma={sigma}"),
            Family::BiPowerPqaly { gamma, epsilon } => format!("gamma={gamma}, epsilon={epsilon}"),
            _ => format!("gamma={}", self.gamma().unwrap_or(f64::NAN)),
        };
        if params.is_empty() {
            self.kind().to_string()
        } else {
            format!("{}({params})", self.kind())
        }
    }
}
