//! Equity- and productivity-sensitive evaluation of population health.
//!
//! A [`Distribution`] holds one `(health state, productivity, lifetime)`
//! profile per individual. An [`EvalSpec`] picks one evaluation family
//! (power QALY, power PALY, power PQALY, their compromises, the bi-power
//! PQALY, or the general HPYE forms) and [`evaluate`] maps distributions
//! to real values, higher being better.
//!
//! On top of evaluation the crate offers
//!
//! * [`axioms`]: seeded counterexample search for each normative axiom,
//!   and the family-by-axiom compliance matrix;
//! * [`threshold`]: the parameter region on which one distribution is
//!   weakly preferred to another;
//! * [`io`] and [`cli`]: JSON distribution/spec files and the `hpye`
//!   command line front end.
//!
//! ```
//! use hpye::{evaluate, example1, EvalSpec};
//!
//! let spec = EvalSpec::power_qaly(0.5, example1::value_set()).unwrap();
//! let value = evaluate(&example1::omega(), &spec).unwrap();
//! assert!((value - 15.26883).abs() < 1e-5);
//! ```

pub mod axioms;
pub mod cli;
pub mod error;
pub mod eval;
pub mod example1;
pub mod fixtures;
pub mod interval;
pub mod io;
pub mod model;
pub mod numeric;
pub mod report;
pub mod spec;
pub mod threshold;
pub mod weights;

pub use error::{Error, Result};
pub use eval::{
    bounded_gain_check, compare, evaluate, hpye, hpye_equivalent, marginal_priority_ratio,
    HpyeValue,
};
pub use interval::{Interval, IntervalSet};
pub use model::{
    indifference_tolerance, quality_weight, validate_profile, validate_value_set, Distribution,
    HealthStateId, Profile, Ranking, ValueSet, Verdict,
};
pub use spec::{EvalSpec, Family, FamilyKind, FreeParam, ParamRange};
pub use threshold::{preference_gap, solve_preference_region, GapFunction, SolverOptions};
