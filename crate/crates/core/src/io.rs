//! JSON distribution and spec files.
//!
//! A distribution file looks like
//!
//! ```json
//! {"profiles": [{"state": "11111", "p": 1.0, "t": 40.0}]}
//! ```
//!
//! Lifetimes and productivities may also be given as strings such as
//! `"NaN"` or `"inf"`; they are parsed and then rejected by validation
//! with the usual error kinds. Every error carries the locus of the
//! offending field, e.g. `profiles[2].p`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{Distribution, HealthStateId, Profile, ValueSet};
use crate::spec::{EvalSpec, Family, FamilyKind};
use crate::weights::{
    Aggregator, HpyeFn, LinearHpye, ProductWeight, ProductivityCurve, SaturatingHpye, WeightFn,
};

fn malformed(locus: impl Into<String>, message: impl Into<String>) -> Error {
    Error::MalformedDocument {
        locus: locus.into(),
        message: message.into(),
    }
}

fn parse_json(bytes: &[u8]) -> Result<Value> {
    serde_json::from_slice(bytes).map_err(|e| {
        malformed(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn number(v: &Value, locus: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| malformed(locus, "number is not representable as f64")),
        Value::String(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| malformed(locus, format!("expected a number, found {s:?}"))),
        other => Err(malformed(
            locus,
            format!("expected a number, found {other}"),
        )),
    }
}

/// Parses a distribution document.
pub fn parse_distribution(bytes: &[u8]) -> Result<Distribution> {
    let doc = parse_json(bytes)?;
    let rows = doc
        .get("profiles")
        .ok_or_else(|| malformed("profiles", "missing field"))?
        .as_array()
        .ok_or_else(|| malformed("profiles", "expected an array"))?;
    if rows.is_empty() {
        return Err(malformed("profiles", "at least one profile is required"));
    }
    let profiles = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let locus = |field: &str| format!("profiles[{i}].{field}");
            let field = |name: &str| {
                row.get(name)
                    .ok_or_else(|| malformed(locus(name), "missing field"))
            };
            let state = field("state")?
                .as_str()
                .ok_or_else(|| malformed(locus("state"), "expected a string"))?;
            let state = HealthStateId::new(state).map_err(|e| e.at(locus("state")))?;
            let p = number(field("p")?, &locus("p"))?;
            let t = number(field("t")?, &locus("t"))?;
            // Validate p alone first so its error points at the p field.
            Profile::new(state.clone(), p, 0.0).map_err(|e| e.at(locus("p")))?;
            Profile::new(state, p, t).map_err(|e| e.at(locus("t")))
        })
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(profiles)
}

/// Serializes a distribution in the same format `parse_distribution` reads.
/// Numbers use the shortest representation that round-trips exactly.
pub fn serialize_distribution(d: &Distribution) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        profiles: &'a [Profile],
    }
    serde_json::to_string_pretty(&Doc {
        profiles: d.profiles(),
    })
    .expect("distributions serialize")
}

/// HPYE shape used by the families with a user-supplied `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HpyeShape {
    /// `f = phi(a, p) t`.
    #[default]
    Linear,
    /// `f = t (w + (1 - w) t / (1 + t))` with `w = phi(a, p)`.
    Saturating,
}

/// Aggregator `g` of the generalized family.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregatorSpec {
    #[default]
    Identity,
    Log1p,
    /// `x^k`.
    Power(f64),
}

impl From<AggregatorSpec> for Aggregator {
    fn from(a: AggregatorSpec) -> Self {
        match a {
            AggregatorSpec::Identity => Aggregator::Identity,
            AggregatorSpec::Log1p => Aggregator::Log1p,
            AggregatorSpec::Power(k) => Aggregator::Power(k),
        }
    }
}

/// On-disk form of an [`EvalSpec`].
///
/// Families with a weight `phi(a, p)` or an HPYE `f` build it as
/// `phi = q(a) v(p)` from `value_set` and the optional `v` knot table
/// (`[[p, v], ...]`, linear when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub family: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_set: Option<ValueSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hpye: Option<HpyeShape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregator: Option<AggregatorSpec>,
}

impl SpecFile {
    pub fn into_spec(self) -> Result<EvalSpec> {
        let vs = match self.value_set {
            Some(vs) => Some(vs.validate().map_err(|e| e.at("value_set"))?),
            None => None,
        };
        let need = |x: Option<f64>, name: &str| {
            x.ok_or_else(|| malformed(name, format!("required by family {}", self.family)))
        };
        let weight = || -> Result<Arc<dyn WeightFn>> {
            let vs = vs.clone().ok_or_else(|| Error::MissingTable {
                family: self.family.to_string(),
                table: "q",
            })?;
            let curve = match &self.v {
                Some(knots) => {
                    ProductivityCurve::tabulated(knots.clone()).map_err(|e| e.at("v"))?
                }
                None => ProductivityCurve::Linear,
            };
            Ok(Arc::new(ProductWeight::new(vs, curve)))
        };
        let hpye = || -> Result<Arc<dyn HpyeFn>> {
            let w = weight()?;
            Ok(match self.hpye.unwrap_or_default() {
                HpyeShape::Linear => Arc::new(LinearHpye::new(w)),
                HpyeShape::Saturating => Arc::new(SaturatingHpye::new(w)),
            })
        };
        let family = match self.family {
            FamilyKind::GeneralizedHpye => Family::Generalized {
                hpye: Some(hpye()?),
                aggregator: self.aggregator.unwrap_or_default().into(),
            },
            FamilyKind::UtilitarianHpye => Family::Utilitarian {
                hpye: Some(hpye()?),
            },
            FamilyKind::PowerHpye => Family::PowerHpye {
                hpye: Some(hpye()?),
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyKind::PqPowerLifetime => Family::PqPowerLifetime {
                phi: weight()?,
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyKind::PowerQaly => Family::PowerQaly {
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyKind::PowerPaly => Family::PowerPaly {
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyKind::PowerPqaly => Family::PowerPqaly {
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyKind::QalyPaly => Family::QalyPaly {
                gamma: need(self.gamma, "gamma")?,
                sigma: need(self.sigma, "sigma")?,
            },
            FamilyKind::QalyPqaly => Family::QalyPqaly {
                gamma: need(self.gamma, "gamma")?,
            },
            FamilyKind::BiPowerPqaly => Family::BiPowerPqaly {
                gamma: need(self.gamma, "gamma")?,
                epsilon: need(self.epsilon, "epsilon")?,
            },
        };
        EvalSpec::new(family, vs)
    }
}

/// Parses a spec document into a validated [`EvalSpec`].
pub fn parse_spec(bytes: &[u8]) -> Result<EvalSpec> {
    let file: SpecFile = serde_json::from_slice(bytes).map_err(|e| {
        malformed(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    file.into_spec()
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| malformed(path.display().to_string(), e.to_string()))
}

pub fn load_distribution(path: impl AsRef<Path>) -> Result<Distribution> {
    let path = path.as_ref();
    parse_distribution(&read(path)?).map_err(|e| e.at(path.display()))
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<EvalSpec> {
    let path = path.as_ref();
    parse_spec(&read(path)?).map_err(|e| e.at(path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example1;

    #[test]
    fn omega_round_trips() {
        let d = example1::omega();
        let text = serialize_distribution(&d);
        assert_eq!(parse_distribution(text.as_bytes()).unwrap(), d);
    }

    #[test]
    fn empty_profiles_are_malformed() {
        let err = parse_distribution(br#"{"profiles": []}"#).unwrap_err();
        assert!(matches!(err, Error::MalformedDocument { .. }));
    }

    #[test]
    fn nan_lifetime_is_located() {
        let err = parse_distribution(br#"{"profiles": [{"state": "11111", "p": 1, "t": "NaN"}]}"#)
            .unwrap_err();
        assert!(matches!(err.kind(), Error::NegativeOrNonFiniteLifetime(t) if t.is_nan()));
        assert!(err.to_string().contains("profiles[0].t"));
    }

    #[test]
    fn productivity_error_is_located() {
        let err =
            parse_distribution(br#"{"profiles": [{"state": "a", "p": 1.5, "t": 1}]}"#).unwrap_err();
        assert!(matches!(err.kind(), Error::OutOfRangeProductivity(_)));
        assert!(err.to_string().contains("profiles[0].p"));
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_distribution(b"{\n\"profiles\": [\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn spec_file_builds_each_family() {
        let vs = r#""value_set": {"full_health": "11111", "q": {"11111": 1, "11211": 0.95}}"#;
        let docs = [
            format!(r#"{{"family": "PowerQALY", "gamma": 0.5, {vs}}}"#),
            r#"{"family": "PowerPALY", "gamma": 0.5}"#.to_string(),
            format!(r#"{{"family": "QalyPaly", "gamma": 0.5, "sigma": 0.3, {vs}}}"#),
            format!(
                r#"{{"family": "PQPowerLifetime", "gamma": 0.5, "v": [[0, 0.5], [1, 1]], {vs}}}"#
            ),
            format!(
                r#"{{"family": "GeneralizedHPYE", "aggregator": "log1p", "hpye": "saturating", {vs}}}"#
            ),
            format!(r#"{{"family": "GeneralizedHPYE", "aggregator": {{"power": 0.5}}, {vs}}}"#),
        ];
        for doc in docs {
            parse_spec(doc.as_bytes()).unwrap_or_else(|e| panic!("{doc}: {e}"));
        }
    }

    #[test]
    fn spec_file_requires_gamma() {
        let err = parse_spec(br#"{"family": "PowerPALY"}"#).unwrap_err();
        assert!(err.to_string().contains("gamma"));
    }
}
