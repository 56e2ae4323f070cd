//! The two five-person distributions of the worked example, with the
//! EQ-5D-5L state `11211` valued at 0.95.
//!
//! `omega` keeps everyone at full health with mixed productivity;
//! `phi(p)` moves four people to state `11211` at ten years each, one of
//! them with productivity `p`.

use std::sync::Arc;

use crate::model::{validate_profile, Distribution, ValueSet};
use crate::spec::EvalSpec;
use crate::weights::{Aggregator, LinearHpye, ProductWeight, ProductivityCurve, WeightFn};

pub const FULL_HEALTH: &str = "11111";
pub const STATE_A: &str = "11211";
pub const Q_A: f64 = 0.95;

pub fn value_set() -> ValueSet {
    ValueSet::from_pairs(FULL_HEALTH, [(FULL_HEALTH, 1.0), (STATE_A, Q_A)]).expect("valid table")
}

fn dist(rows: &[(&str, f64, f64)]) -> Distribution {
    Distribution::new(
        rows.iter()
            .map(|&(a, p, t)| validate_profile(a, p, t).expect("valid profile"))
            .collect(),
    )
    .expect("non-empty")
}

pub fn omega() -> Distribution {
    dist(&[
        (FULL_HEALTH, 1.0, 40.0),
        (FULL_HEALTH, 0.5, 5.0),
        (FULL_HEALTH, 0.0, 20.0),
        (FULL_HEALTH, 0.5, 5.0),
        (FULL_HEALTH, 0.0, 0.0),
    ])
}

/// Panics unless `0 <= p <= 1`.
pub fn phi(p: f64) -> Distribution {
    dist(&[
        (FULL_HEALTH, 1.0, 40.0),
        (STATE_A, 0.0, 10.0),
        (STATE_A, p, 10.0),
        (STATE_A, 0.0, 10.0),
        (STATE_A, 0.0, 0.0),
    ])
}

/// One spec per family over the example's value set, with `r = 0.6 q`,
/// `s = 0.4 q`, `sigma = 0.5`, `epsilon = 0.3` and a linear `v` where
/// one is needed.
pub fn all_families(gamma: f64) -> Vec<EvalSpec> {
    let vs = value_set();
    let phi: Arc<dyn WeightFn> =
        Arc::new(ProductWeight::new(vs.clone(), ProductivityCurve::Linear));
    let f = Arc::new(LinearHpye::new(phi.clone()));
    let rs = vs.with_convex_split(0.6).expect("valid split");
    vec![
        EvalSpec::generalized(f.clone(), Aggregator::Log1p, Some(vs.clone())).unwrap(),
        EvalSpec::utilitarian(f.clone(), Some(vs.clone())).unwrap(),
        EvalSpec::power_hpye(gamma, f, Some(vs.clone())).unwrap(),
        EvalSpec::pq_power_lifetime(gamma, phi, Some(vs.clone())).unwrap(),
        EvalSpec::power_qaly(gamma, vs.clone()).unwrap(),
        EvalSpec::power_paly(gamma)
            .unwrap()
            .with_value_set(vs.clone())
            .unwrap(),
        EvalSpec::power_pqaly(gamma, vs.clone()).unwrap(),
        EvalSpec::qaly_paly(gamma, 0.5, vs.clone()).unwrap(),
        EvalSpec::qaly_pqaly(gamma, rs).unwrap(),
        EvalSpec::bi_power_pqaly(gamma, 0.3, vs).unwrap(),
    ]
}
