//! Default test tables and specs used to reproduce the compliance matrix
//! of the nine evaluation families.
//!
//! The general families (`E^g`, `E^γf`, `E^γφ`) are instantiated with
//! ingredients that are *generic* members of their class, so that the
//! axioms they do not satisfy in general are visibly violated:
//!
//! * `E^g`: `g(x) = ln(1 + x)` over a saturating HPYE with `w = q(a) p^2`.
//! * `E^γf`: the same saturating HPYE under `x^0.5`.
//! * `E^γφ`: `phi(a, p) = q(a) v(p)` with `v` tabulated from `(1 + p^2) / 2`.

use std::sync::Arc;

use crate::model::{table, ValueSet};
use crate::spec::EvalSpec;
use crate::weights::{
    Aggregator, HpyeFn, LinearHpye, ProductWeight, ProductivityCurve, SaturatingHpye, WeightFn,
};

pub const GAMMA: f64 = 0.5;
pub const EPSILON: f64 = 0.3;
pub const SIGMA: f64 = 0.5;

/// Five EQ-5D-5L states with distinct quality weights and independent
/// `r`/`s` tables.
pub fn value_set() -> ValueSet {
    let q = table([
        ("11111", 1.0),
        ("11211", 0.95),
        ("21232", 0.78),
        ("32323", 0.52),
        ("43444", 0.21),
    ])
    .unwrap();
    let r = table([
        ("11111", 0.6),
        ("11211", 0.55),
        ("21232", 0.5),
        ("32323", 0.3),
        ("43444", 0.15),
    ])
    .unwrap();
    let s = table([
        ("11111", 0.4),
        ("11211", 0.4),
        ("21232", 0.28),
        ("32323", 0.22),
        ("43444", 0.06),
    ])
    .unwrap();
    ValueSet::new(
        crate::model::HealthStateId::new("11111").unwrap(),
        q,
        Some(r),
        Some(s),
    )
    .expect("valid fixture tables")
}

/// `v(p) = (1 + p^2) / 2` sampled at quarter points.
pub fn convex_curve() -> ProductivityCurve {
    let knots = (0..=4)
        .map(|k| {
            let p = k as f64 / 4.0;
            (p, (1.0 + p * p) / 2.0)
        })
        .collect();
    ProductivityCurve::tabulated(knots).expect("valid fixture curve")
}

pub fn saturating_hpye() -> Arc<dyn HpyeFn> {
    let w: Arc<dyn WeightFn> = Arc::new(ProductWeight::new(
        value_set(),
        ProductivityCurve::Power(2.0),
    ));
    Arc::new(SaturatingHpye::new(w))
}

/// `f(a, p, t) = q(a) p t`.
pub fn linear_hpye() -> Arc<dyn HpyeFn> {
    let w: Arc<dyn WeightFn> = Arc::new(ProductWeight::new(value_set(), ProductivityCurve::Linear));
    Arc::new(LinearHpye::new(w))
}

/// The nine families in compliance-matrix column order.
pub fn table1_specs() -> Vec<EvalSpec> {
    let vs = value_set();
    let phi: Arc<dyn WeightFn> = Arc::new(ProductWeight::new(vs.clone(), convex_curve()));
    vec![
        EvalSpec::generalized(saturating_hpye(), Aggregator::Log1p, Some(vs.clone())).unwrap(),
        EvalSpec::power_hpye(GAMMA, saturating_hpye(), Some(vs.clone())).unwrap(),
        EvalSpec::pq_power_lifetime(GAMMA, phi, Some(vs.clone())).unwrap(),
        EvalSpec::power_qaly(GAMMA, vs.clone()).unwrap(),
        EvalSpec::power_paly(GAMMA)
            .unwrap()
            .with_value_set(vs.clone())
            .unwrap(),
        EvalSpec::power_pqaly(GAMMA, vs.clone()).unwrap(),
        EvalSpec::qaly_paly(GAMMA, SIGMA, vs.clone()).unwrap(),
        EvalSpec::qaly_pqaly(GAMMA, vs.clone()).unwrap(),
        EvalSpec::bi_power_pqaly(GAMMA, EPSILON, vs).unwrap(),
    ]
}

/// Generalized HPYE with `g = identity`: the unweighted HPYE sum.
pub fn utilitarian_identity() -> EvalSpec {
    EvalSpec::generalized(linear_hpye(), Aggregator::Identity, Some(value_set())).unwrap()
}

/// Generalized HPYE with the non-power aggregator `g(x) = ln(1 + x)`.
pub fn log_aggregator() -> EvalSpec {
    EvalSpec::generalized(linear_hpye(), Aggregator::Log1p, Some(value_set())).unwrap()
}
