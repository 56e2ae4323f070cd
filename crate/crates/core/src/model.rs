//! Profiles and distributions, plus the quality weight tables that value them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative scale of the indifference band: two values are socially
/// indifferent when they differ by at most `INDIFFERENCE_RTOL * max(1, |a|, |b|)`.
pub const INDIFFERENCE_RTOL: f64 = 1e-9;

pub fn indifference_tolerance(a: f64, b: f64) -> f64 {
    INDIFFERENCE_RTOL * 1f64.max(a.abs()).max(b.abs())
}

/// Opaque health state label, e.g. an EQ-5D-5L code such as `"11211"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct HealthStateId(String);

impl HealthStateId {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::EmptyStateLabel);
        }
        Ok(HealthStateId(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for HealthStateId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        HealthStateId::new(s)
    }
}

impl From<HealthStateId> for String {
    fn from(id: HealthStateId) -> String {
        id.0
    }
}

impl fmt::Display for HealthStateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One individual's health state, productivity share and remaining lifetime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    state: HealthStateId,
    #[serde(rename = "p")]
    productivity: f64,
    #[serde(rename = "t")]
    lifetime: f64,
}

impl Profile {
    /// Validates a `(state, productivity, lifetime)` triple.
    pub fn new(state: HealthStateId, productivity: f64, lifetime: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&productivity) {
            return Err(Error::OutOfRangeProductivity(productivity));
        }
        if !lifetime.is_finite() || lifetime < 0.0 {
            return Err(Error::NegativeOrNonFiniteLifetime(lifetime));
        }
        Ok(Profile {
            state,
            productivity,
            lifetime,
        })
    }

    pub fn state(&self) -> &HealthStateId {
        &self.state
    }

    pub fn productivity(&self) -> f64 {
        self.productivity
    }

    pub fn lifetime(&self) -> f64 {
        self.lifetime
    }

    pub fn with_state(&self, state: HealthStateId) -> Profile {
        Profile {
            state,
            ..self.clone()
        }
    }

    pub fn with_productivity(&self, productivity: f64) -> Result<Profile> {
        Profile::new(self.state.clone(), productivity, self.lifetime)
    }

    pub fn with_lifetime(&self, lifetime: f64) -> Result<Profile> {
        Profile::new(self.state.clone(), self.productivity, lifetime)
    }
}

/// Convenience wrapper around [`Profile::new`] taking a plain label.
pub fn validate_profile(state: &str, productivity: f64, lifetime: f64) -> Result<Profile> {
    Profile::new(HealthStateId::new(state)?, productivity, lifetime)
}

/// An ordered, non-empty population of profiles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    profiles: Vec<Profile>,
}

impl Distribution {
    pub fn new(profiles: Vec<Profile>) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        Ok(Distribution { profiles })
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Profile> {
        self.profiles.iter()
    }

    /// Copy with individual `i` replaced.
    pub fn with_profile(&self, i: usize, profile: Profile) -> Distribution {
        let mut profiles = self.profiles.clone();
        profiles[i] = profile;
        Distribution { profiles }
    }

    /// Copy whose profile at position `k` is `self[order[k]]`.
    pub fn permuted(&self, order: &[usize]) -> Distribution {
        assert_eq!(order.len(), self.len(), "permutation length mismatch");
        Distribution {
            profiles: order.iter().map(|&k| self.profiles[k].clone()).collect(),
        }
    }

    /// Multiplies every lifetime by `c > 0`.
    pub fn scale_lifetimes(&self, c: f64) -> Result<Distribution> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "lifetime scale must be positive and finite",
            });
        }
        self.map(|p| p.with_lifetime(c * p.lifetime()))
    }

    /// Multiplies every productivity by `c` in `(0, 1]`.
    pub fn scale_productivities(&self, c: f64) -> Result<Distribution> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "productivity scale must lie in (0, 1]",
            });
        }
        self.map(|p| p.with_productivity(c * p.productivity()))
    }

    fn map(&self, f: impl Fn(&Profile) -> Result<Profile>) -> Result<Distribution> {
        Ok(Distribution {
            profiles: self.profiles.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl<'a> IntoIterator for &'a Distribution {
    type Item = &'a Profile;
    type IntoIter = std::slice::Iter<'a, Profile>;

    fn into_iter(self) -> Self::IntoIter {
        self.profiles.iter()
    }
}

/// Quality weight tables with a designated full health state.
///
/// `q` is always present. The optional `r`/`s` pair carries the two
/// independent tables of the QALY-PQALY family and must satisfy
/// `r[a] <= r[a*]`, `r[a] + s[a] <= r[a*] + s[a*] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSet {
    full_health: HealthStateId,
    q: BTreeMap<HealthStateId, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<BTreeMap<HealthStateId, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<BTreeMap<HealthStateId, f64>>,
}

impl ValueSet {
    /// Builds and validates a value set.
    pub fn new(
        full_health: HealthStateId,
        q: BTreeMap<HealthStateId, f64>,
        r: Option<BTreeMap<HealthStateId, f64>>,
        s: Option<BTreeMap<HealthStateId, f64>>,
    ) -> Result<Self> {
        ValueSet {
            full_health,
            q,
            r,
            s,
        }
        .validate()
    }

    /// Quality-only value set from `(label, weight)` pairs.
    pub fn from_pairs<'a>(
        full_health: &str,
        q: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<Self> {
        ValueSet::new(HealthStateId::new(full_health)?, table(q)?, None, None)
    }

    /// Returns a copy with the `r`/`s` tables replaced.
    pub fn with_rs(
        &self,
        r: BTreeMap<HealthStateId, f64>,
        s: BTreeMap<HealthStateId, f64>,
    ) -> Result<Self> {
        ValueSet::new(self.full_health.clone(), self.q.clone(), Some(r), Some(s))
    }

    /// The convex QALY/PQALY split `r = delta q`, `s = (1 - delta) q`.
    pub fn with_convex_split(&self, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "split weight must lie in [0, 1]",
            });
        }
        let r = self
            .q
            .iter()
            .map(|(k, &v)| (k.clone(), delta * v))
            .collect();
        let s = self
            .q
            .iter()
            .map(|(k, &v)| (k.clone(), (1.0 - delta) * v))
            .collect();
        self.with_rs(r, s)
    }

    /// Checks every table invariant in one pass.
    pub fn validate(self) -> Result<Self> {
        check_table("q", &self.q)?;
        match self.q.get(&self.full_health) {
            None => {
                return Err(Error::MissingFullHealth {
                    table: "q",
                    state: self.full_health.to_string(),
                })
            }
            Some(&w) if w != 1.0 => {
                return Err(Error::FullHealthWeightNotOne {
                    table: "q",
                    state: self.full_health.to_string(),
                    value: w,
                })
            }
            Some(_) => {}
        }
        match (&self.r, &self.s) {
            (None, None) => {}
            (Some(r), Some(s)) => self.check_rs(r, s)?,
            _ => {
                return Err(Error::RSConstraintViolated {
                    state: self.full_health.to_string(),
                    detail: "r and s tables must be supplied together".into(),
                })
            }
        }
        Ok(self)
    }

    fn check_rs(
        &self,
        r: &BTreeMap<HealthStateId, f64>,
        s: &BTreeMap<HealthStateId, f64>,
    ) -> Result<()> {
        check_table("r", r)?;
        check_table("s", s)?;
        let star = &self.full_health;
        let violated = |state: &HealthStateId, detail: String| Error::RSConstraintViolated {
            state: state.to_string(),
            detail,
        };
        let (r_star, s_star) = match (r.get(star), s.get(star)) {
            (Some(&a), Some(&b)) => (a, b),
            _ => {
                return Err(violated(
                    star,
                    "full health must appear in both r and s".into(),
                ))
            }
        };
        // Sums are compared with a few ulps of slack so that r = delta q,
        // s = (1 - delta) q splits are accepted for every delta.
        let slack = 4.0 * f64::EPSILON;
        if (r_star + s_star - 1.0).abs() > slack {
            return Err(violated(
                star,
                format!("r(a*) + s(a*) = {} must equal 1", r_star + s_star),
            ));
        }
        for (state, &rv) in r {
            let Some(&sv) = s.get(state) else {
                return Err(violated(state, "present in r but not in s".into()));
            };
            if rv > r_star {
                return Err(violated(
                    state,
                    format!("r = {rv} exceeds r(a*) = {r_star}"),
                ));
            }
            if rv + sv > 1.0 + slack {
                return Err(violated(state, format!("r + s = {} exceeds 1", rv + sv)));
            }
        }
        if let Some(state) = s.keys().find(|k| !r.contains_key(*k)) {
            return Err(violated(state, "present in s but not in r".into()));
        }
        Ok(())
    }

    pub fn full_health(&self) -> &HealthStateId {
        &self.full_health
    }

    pub fn q_table(&self) -> &BTreeMap<HealthStateId, f64> {
        &self.q
    }

    pub fn has_rs(&self) -> bool {
        self.r.is_some()
    }

    pub fn quality_weight(&self, a: &HealthStateId) -> Result<f64> {
        lookup(&self.q, a)
    }

    pub fn r_weight(&self, a: &HealthStateId) -> Result<Option<f64>> {
        self.r.as_ref().map(|t| lookup(t, a)).transpose()
    }

    pub fn s_weight(&self, a: &HealthStateId) -> Result<Option<f64>> {
        self.s.as_ref().map(|t| lookup(t, a)).transpose()
    }

    /// Every state label that appears in any table, in sorted order.
    pub fn states(&self) -> Vec<HealthStateId> {
        let mut all: Vec<_> = self.q.keys().cloned().collect();
        for t in [&self.r, &self.s].into_iter().flatten() {
            all.extend(t.keys().cloned());
        }
        all.sort();
        all.dedup();
        all
    }
}

/// Validates a raw value set.
pub fn validate_value_set(raw: ValueSet) -> Result<ValueSet> {
    raw.validate()
}

/// Table lookup of `q(a)`.
pub fn quality_weight(vs: &ValueSet, a: &HealthStateId) -> Result<f64> {
    vs.quality_weight(a)
}

/// Builds a weight table from `(label, weight)` pairs.
pub fn table<'a>(
    pairs: impl IntoIterator<Item = (&'a str, f64)>,
) -> Result<BTreeMap<HealthStateId, f64>> {
    pairs
        .into_iter()
        .map(|(k, v)| Ok((HealthStateId::new(k)?, v)))
        .collect()
}

fn lookup(t: &BTreeMap<HealthStateId, f64>, a: &HealthStateId) -> Result<f64> {
    t.get(a)
        .copied()
        .ok_or_else(|| Error::UnknownHealthState(a.to_string()))
}

fn check_table(name: &'static str, t: &BTreeMap<HealthStateId, f64>) -> Result<()> {
    for (state, &w) in t {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::WeightOutOfRange {
                table: name,
                state: state.to_string(),
                value: w,
            });
        }
    }
    Ok(())
}

/// Outcome of comparing distribution A against distribution B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AStrictlyPreferred,
    BStrictlyPreferred,
    Indifferent,
}

impl Verdict {
    /// Classifies a gap `E[A] - E[B]` against a tolerance.
    pub fn from_gap(gap: f64, tolerance: f64) -> Verdict {
        if gap.abs() <= tolerance {
            Verdict::Indifferent
        } else if gap > 0.0 {
            Verdict::AStrictlyPreferred
        } else {
            Verdict::BStrictlyPreferred
        }
    }

    pub fn reversed(self) -> Verdict {
        match self {
            Verdict::AStrictlyPreferred => Verdict::BStrictlyPreferred,
            Verdict::BStrictlyPreferred => Verdict::AStrictlyPreferred,
            Verdict::Indifferent => Verdict::Indifferent,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::AStrictlyPreferred => "A strictly preferred",
            Verdict::BStrictlyPreferred => "B strictly preferred",
            Verdict::Indifferent => "indifferent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ranking {
    pub verdict: Verdict,
    /// `E[A] - E[B]`.
    pub gap: f64,
    pub value_a: f64,
    pub value_b: f64,
}

impl Ranking {
    pub fn from_values(value_a: f64, value_b: f64) -> Ranking {
        let gap = value_a - value_b;
        Ranking {
            verdict: Verdict::from_gap(gap, indifference_tolerance(value_a, value_b)),
            gap,
            value_a,
            value_b,
        }
    }

    pub fn tolerance(&self) -> f64 {
        indifference_tolerance(self.value_a, self.value_b)
    }

    /// `A` weakly preferred to `B`.
    pub fn weakly_prefers_a(&self) -> bool {
        self.verdict != Verdict::BStrictlyPreferred
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, gap={}", self.verdict, self.gap)
    }
}
