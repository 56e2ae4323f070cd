//! Pluggable ingredients of the general families: lifetime weights
//! `phi(a, p)`, HPYE functions `f(a, p, t)` and aggregators `g`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{HealthStateId, Profile, ValueSet};
use crate::numeric::pow0;

/// A lifetime weight `phi(a, p)` in `[0, 1]` with `phi(a*, 1) = 1`.
pub trait WeightFn: fmt::Debug + Send + Sync {
    fn weight(&self, state: &HealthStateId, productivity: f64) -> Result<f64>;
}

/// A healthy productive years equivalent `f(a, p, t)`.
pub trait HpyeFn: fmt::Debug + Send + Sync {
    fn hpye(&self, profile: &Profile) -> Result<f64>;
}

/// Productivity curve `v: [0, 1] -> [0, 1]` with `v(1) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductivityCurve {
    /// `v(p) = p`.
    Linear,
    /// `v(p) = p^k`, `k > 0`.
    Power(f64),
    /// Piecewise linear interpolation through `(p, v)` knots spanning `[0, 1]`.
    Tabulated(Vec<(f64, f64)>),
}

impl ProductivityCurve {
    pub fn tabulated(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidWeightFunction(format!("v table: {msg}")));
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.len() < 2 {
            return bad("needs at least two knots");
        }
        if knots[0].0 != 0.0 || knots[knots.len() - 1].0 != 1.0 {
            return bad("knots must start at p = 0 and end at p = 1");
        }
        if knots[knots.len() - 1].1 != 1.0 {
            return bad("v(1) must equal 1");
        }
        for w in knots.windows(2) {
            if w[0].0 == w[1].0 {
                return bad("duplicate productivity knot");
            }
            if w[1].1 < w[0].1 {
                return bad("values must be non-decreasing in p");
            }
        }
        if knots.iter().any(|&(_, v)| !(0.0..=1.0).contains(&v)) {
            return bad("values must lie in [0, 1]");
        }
        Ok(ProductivityCurve::Tabulated(knots))
    }

    pub fn eval(&self, p: f64) -> f64 {
        match self {
            ProductivityCurve::Linear => p,
            ProductivityCurve::Power(k) => pow0(p, *k),
            ProductivityCurve::Tabulated(knots) => {
                let idx = knots.partition_point(|&(x, _)| x <= p);
                if idx == 0 {
                    return knots[0].1;
                }
                if idx == knots.len() {
                    return knots[knots.len() - 1].1;
                }
                let (x0, y0) = knots[idx - 1];
                let (x1, y1) = knots[idx];
                y0 + (y1 - y0) * (p - x0) / (x1 - x0)
            }
        }
    }
}

/// Product-form weight `phi(a, p) = q(a) v(p)`.
#[derive(Debug, Clone)]
pub struct ProductWeight {
    value_set: ValueSet,
    curve: ProductivityCurve,
}

impl ProductWeight {
    pub fn new(value_set: ValueSet, curve: ProductivityCurve) -> Self {
        ProductWeight { value_set, curve }
    }

    pub fn curve(&self) -> &ProductivityCurve {
        &self.curve
    }
}

impl WeightFn for ProductWeight {
    fn weight(&self, state: &HealthStateId, productivity: f64) -> Result<f64> {
        Ok(self.value_set.quality_weight(state)? * self.curve.eval(productivity))
    }
}

/// `f(a, p, t) = phi(a, p) t`: an HPYE proportional to lifetime.
#[derive(Debug, Clone)]
pub struct LinearHpye {
    weight: Arc<dyn WeightFn>,
}

impl LinearHpye {
    pub fn new(weight: Arc<dyn WeightFn>) -> Self {
        LinearHpye { weight }
    }
}

impl HpyeFn for LinearHpye {
    fn hpye(&self, profile: &Profile) -> Result<f64> {
        let w = self
            .weight
            .weight(profile.state(), profile.productivity())?;
        Ok(w * profile.lifetime())
    }
}

/// `f(a, p, t) = t (w + (1 - w) t / (1 + t))` with `w = phi(a, p)`.
///
/// Short lives are discounted by `w` while long lives approach full value,
/// so `f` is not proportional to `t`. Used to exercise the scale axioms
/// on the generalized and power HPYE families.
#[derive(Debug, Clone)]
pub struct SaturatingHpye {
    weight: Arc<dyn WeightFn>,
}

impl SaturatingHpye {
    pub fn new(weight: Arc<dyn WeightFn>) -> Self {
        SaturatingHpye { weight }
    }
}

impl HpyeFn for SaturatingHpye {
    fn hpye(&self, profile: &Profile) -> Result<f64> {
        let w = self
            .weight
            .weight(profile.state(), profile.productivity())?;
        let t = profile.lifetime();
        Ok(t * (w + (1.0 - w) * t / (1.0 + t)))
    }
}

/// Strictly increasing continuous aggregator `g`.
#[derive(Clone)]
pub enum Aggregator {
    Identity,
    /// `x^k`, `k > 0`.
    Power(f64),
    /// `ln(1 + x)`.
    Log1p,
    Custom {
        name: String,
        g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl Aggregator {
    pub fn custom(name: impl Into<String>, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Aggregator::Custom {
            name: name.into(),
            g: Arc::new(g),
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Aggregator::Identity => x,
            Aggregator::Power(k) => pow0(x, *k),
            Aggregator::Log1p => x.ln_1p(),
            Aggregator::Custom { g, .. } => g(x),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Aggregator::Identity => "identity".into(),
            Aggregator::Power(k) => format!("x^{k}"),
            Aggregator::Log1p => "ln(1+x)".into(),
            Aggregator::Custom { name, .. } => name.clone(),
        }
    }

    /// Spot-checks strict monotonicity on a fixed grid.
    pub fn validate(&self) -> Result<()> {
        if let Aggregator::Power(k) = self {
            if !(*k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "aggregator exponent",
                    value: *k,
                    reason: "must be positive",
                });
            }
        }
        let mut prev = self.apply(0.0);
        for x in sample_lifetimes().into_iter().skip(1) {
            let y = self.apply(x);
            if !y.is_finite() || y <= prev {
                return Err(Error::InvalidHpyeFunction(format!(
                    "aggregator {} is not strictly increasing at x = {x}",
                    self.name()
                )));
            }
            prev = y;
        }
        Ok(())
    }
}

impl fmt::Debug for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aggregator({})", self.name())
    }
}

fn sample_productivities() -> impl Iterator<Item = f64> {
    (0..=20).map(|k| k as f64 / 20.0)
}

fn sample_lifetimes() -> Vec<f64> {
    vec![0.0, 1e-3, 0.1, 0.5, 1.0, 2.5, 7.0, 20.0, 40.0, 100.0]
}

/// Sample-checks `0 <= phi <= phi(a*, 1) = 1`, `phi(a, p) <= phi(a*, p)`
/// and `phi(a, p) <= phi(a, 1)` over the given states.
pub fn validate_weight_fn(
    phi: &dyn WeightFn,
    states: &[HealthStateId],
    full_health: &HealthStateId,
) -> Result<()> {
    let top = phi.weight(full_health, 1.0)?;
    if top != 1.0 {
        return Err(Error::InvalidWeightFunction(format!(
            "phi(a*, 1) = {top}, expected 1"
        )));
    }
    for a in states {
        let at_one = phi.weight(a, 1.0)?;
        for p in sample_productivities() {
            let w = phi.weight(a, p)?;
            let star = phi.weight(full_health, p)?;
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidWeightFunction(format!(
                    "phi({a}, {p}) = {w} outside [0, 1]"
                )));
            }
            if w > star || w > at_one {
                return Err(Error::InvalidWeightFunction(format!(
                    "phi({a}, {p}) = {w} exceeds its full health or full productivity counterpart"
                )));
            }
        }
    }
    Ok(())
}

/// Sample-checks `0 <= f <= t`, `f(a*, 1, t) = t` and dominance by full
/// health and maximal productivity over the given states.
pub fn validate_hpye_fn(
    f: &dyn HpyeFn,
    states: &[HealthStateId],
    full_health: &HealthStateId,
) -> Result<()> {
    let eval = |a: &HealthStateId, p: f64, t: f64| -> Result<f64> {
        f.hpye(&Profile::new(a.clone(), p, t)?)
    };
    for t in sample_lifetimes() {
        let top = eval(full_health, 1.0, t)?;
        if (top - t).abs() > 1e-12 * t.max(1.0) {
            return Err(Error::InvalidHpyeFunction(format!(
                "f(a*, 1, {t}) = {top}, expected {t}"
            )));
        }
        for a in states {
            let at_one = eval(a, 1.0, t)?;
            for p in sample_productivities() {
                let v = eval(a, p, t)?;
                let star = eval(full_health, p, t)?;
                if !(v >= 0.0 && v <= t * (1.0 + 1e-12)) {
                    return Err(Error::InvalidHpyeFunction(format!(
                        "f({a}, {p}, {t}) = {v} outside [0, t]"
                    )));
                }
                if v > star * (1.0 + 1e-12) || v > at_one * (1.0 + 1e-12) {
                    return Err(Error::InvalidHpyeFunction(format!(
                        "f({a}, {p}, {t}) = {v} exceeds its full health or full productivity counterpart"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> ValueSet {
        ValueSet::from_pairs("11111", [("11111", 1.0), ("11211", 0.95), ("33333", 0.4)]).unwrap()
    }

    #[test]
    fn tabulated_curve_interpolates() {
        let c = ProductivityCurve::tabulated(vec![(1.0, 1.0), (0.0, 0.5), (0.5, 0.625)]).unwrap();
        assert_eq!(c.eval(0.0), 0.5);
        assert_eq!(c.eval(0.25), 0.5625);
        assert_eq!(c.eval(0.5), 0.625);
        assert_eq!(c.eval(1.0), 1.0);
        assert!(ProductivityCurve::tabulated(vec![(0.0, 0.2), (1.0, 0.9)]).is_err());
        assert!(ProductivityCurve::tabulated(vec![(0.0, 0.8), (0.5, 0.2), (1.0, 1.0)]).is_err());
        assert!(ProductivityCurve::tabulated(vec![(0.1, 0.2), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn product_weight_passes_validation() {
        let vs = vs();
        let phi = ProductWeight::new(vs.clone(), ProductivityCurve::Power(2.0));
        validate_weight_fn(&phi, &vs.states(), vs.full_health()).unwrap();
    }

    #[derive(Debug)]
    struct Inverted;
    impl WeightFn for Inverted {
        fn weight(&self, a: &HealthStateId, p: f64) -> Result<f64> {
            // Away from full health, lower productivity is valued more.
            Ok(match (a.as_str(), p == 1.0) {
                ("11111", true) => 1.0,
                (_, true) => 0.5,
                _ => 0.9,
            })
        }
    }

    #[test]
    fn weight_exceeding_full_productivity_is_rejected() {
        let vs = vs();
        assert!(matches!(
            validate_weight_fn(&Inverted, &vs.states(), vs.full_health()),
            Err(Error::InvalidWeightFunction(_))
        ));
    }

    #[test]
    fn hpye_fixtures_pass_validation() {
        let vs = vs();
        let phi: Arc<dyn WeightFn> = Arc::new(ProductWeight::new(
            vs.clone(),
            ProductivityCurve::Power(2.0),
        ));
        validate_hpye_fn(
            &LinearHpye::new(phi.clone()),
            &vs.states(),
            vs.full_health(),
        )
        .unwrap();
        validate_hpye_fn(&SaturatingHpye::new(phi), &vs.states(), vs.full_health()).unwrap();
    }

    #[derive(Debug)]
    struct Doubling;
    impl HpyeFn for Doubling {
        fn hpye(&self, profile: &Profile) -> Result<f64> {
            Ok(2.0 * profile.lifetime())
        }
    }

    #[test]
    fn hpye_above_lifetime_is_rejected() {
        let vs = vs();
        assert!(validate_hpye_fn(&Doubling, &vs.states(), vs.full_health()).is_err());
    }

    #[test]
    fn aggregators() {
        assert!(Aggregator::Identity.validate().is_ok());
        assert!(Aggregator::Log1p.validate().is_ok());
        assert!(Aggregator::Power(0.5).validate().is_ok());
        assert!(Aggregator::Power(-1.0).validate().is_err());
        assert!(Aggregator::custom("flat", |_| 1.0).validate().is_err());
        assert!((Aggregator::Power(0.5).apply(9.0) - 3.0).abs() < 1e-14);
    }
}
