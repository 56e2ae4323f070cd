//! Evaluation of distributions and individual HPYEs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Distribution, Profile, Ranking};
use crate::numeric::{pow0, sum};
use crate::spec::{EvalSpec, Family};

/// Healthy productive years equivalent: the lifetime at full health and
/// maximal productivity judged equivalent to a profile.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct HpyeValue(f64);

impl HpyeValue {
    pub fn years(self) -> f64 {
        self.0
    }
}

/// Closed-form lifetime weight `w(a, p)` of a parametric power family,
/// so that the family's term is `w t^gamma`. `None` for families whose
/// HPYE is user supplied.
pub fn lifetime_weight(profile: &Profile, spec: &EvalSpec) -> Option<Result<f64>> {
    let a = profile.state();
    let p = profile.productivity();
    let vs = spec.value_set();
    let q = || vs.expect("validated spec carries q").quality_weight(a);
    let w = match spec.family() {
        Family::Generalized { .. } | Family::Utilitarian { .. } | Family::PowerHpye { .. } => {
            return None
        }
        Family::PqPowerLifetime { phi, .. } => phi.weight(a, p),
        Family::PowerQaly { .. } => q(),
        Family::PowerPaly { .. } => Ok(p),
        Family::PowerPqaly { .. } => q().map(|q| q * p),
        Family::QalyPaly { sigma, .. } => q().map(|q| p + sigma * (q - p)),
        Family::QalyPqaly { .. } => rs(profile, spec).map(|(r, s)| r + s * p),
        Family::BiPowerPqaly { epsilon, .. } => q().map(|q| q * pow0(p, *epsilon)),
    };
    Some(w)
}

fn rs(profile: &Profile, spec: &EvalSpec) -> Result<(f64, f64)> {
    let vs = spec.value_set().expect("validated spec carries r/s");
    let r = vs
        .r_weight(profile.state())?
        .expect("validated spec carries r");
    let s = vs
        .s_weight(profile.state())?
        .expect("validated spec carries s");
    Ok((r, s))
}

/// HPYE of one profile under `spec`.
///
/// For the power families this is `w(a, p)^(1/gamma) t`; for the HPYE
/// families it is the user-supplied `f`.
pub fn hpye(profile: &Profile, spec: &EvalSpec) -> Result<HpyeValue> {
    let t = profile.lifetime();
    let full = profile.productivity() == 1.0 && *profile.state() == spec.full_health();
    if let Some(w) = lifetime_weight(profile, spec) {
        let w = w?;
        if full {
            return Ok(HpyeValue(t));
        }
        let gamma = spec.gamma().expect("power families carry gamma");
        return Ok(HpyeValue(pow0(w, 1.0 / gamma) * t));
    }
    let f = match spec.family() {
        Family::Generalized { hpye, .. }
        | Family::Utilitarian { hpye }
        | Family::PowerHpye { hpye, .. } => hpye.as_ref(),
        _ => unreachable!("parametric families handled above"),
    };
    let f = f.ok_or_else(|| Error::UnsupportedFamily(spec.kind().to_string()))?;
    Ok(HpyeValue(f.hpye(profile)?))
}

/// Value of `d` under `spec`; higher is better.
pub fn evaluate(d: &Distribution, spec: &EvalSpec) -> Result<f64> {
    let terms = |term: &dyn Fn(&Profile) -> Result<f64>| -> Result<f64> {
        let values = d.iter().map(term).collect::<Result<Vec<f64>>>()?;
        Ok(sum(values.into_iter()))
    };
    let vs = spec.value_set();
    let q = |p: &Profile| {
        vs.expect("validated spec carries q")
            .quality_weight(p.state())
    };
    match spec.family() {
        Family::Generalized { aggregator, .. } => {
            terms(&|p| Ok(aggregator.apply(hpye(p, spec)?.years())))
        }
        Family::Utilitarian { .. } => terms(&|p| Ok(hpye(p, spec)?.years())),
        Family::PowerHpye { gamma, .. } => terms(&|p| Ok(pow0(hpye(p, spec)?.years(), *gamma))),
        Family::PqPowerLifetime { phi, gamma } => {
            terms(&|p| Ok(phi.weight(p.state(), p.productivity())? * pow0(p.lifetime(), *gamma)))
        }
        Family::PowerQaly { gamma } => terms(&|p| Ok(q(p)? * pow0(p.lifetime(), *gamma))),
        Family::PowerPaly { gamma } => {
            terms(&|p| Ok(p.productivity() * pow0(p.lifetime(), *gamma)))
        }
        Family::PowerPqaly { gamma } => {
            terms(&|p| Ok(q(p)? * p.productivity() * pow0(p.lifetime(), *gamma)))
        }
        Family::QalyPaly { gamma, sigma } => {
            let qaly = terms(&|p| Ok(q(p)? * pow0(p.lifetime(), *gamma)))?;
            let paly = terms(&|p| Ok(p.productivity() * pow0(p.lifetime(), *gamma)))?;
            Ok(sigma * qaly + (1.0 - sigma) * paly)
        }
        Family::QalyPqaly { gamma } => {
            let qaly = terms(&|p| Ok(rs(p, spec)?.0 * pow0(p.lifetime(), *gamma)))?;
            let pqaly =
                terms(&|p| Ok(rs(p, spec)?.1 * p.productivity() * pow0(p.lifetime(), *gamma)))?;
            Ok(qaly + pqaly)
        }
        Family::BiPowerPqaly { gamma, epsilon } => {
            terms(&|p| Ok(q(p)? * pow0(p.productivity(), *epsilon) * pow0(p.lifetime(), *gamma)))
        }
    }
}

/// Ranks `a` against `b`.
pub fn compare(a: &Distribution, b: &Distribution, spec: &EvalSpec) -> Result<Ranking> {
    Ok(Ranking::from_values(evaluate(a, spec)?, evaluate(b, spec)?))
}

/// The distribution in which every individual is moved to full health and
/// maximal productivity with their HPYE as lifetime.
pub fn hpye_equivalent(d: &Distribution, spec: &EvalSpec) -> Result<Distribution> {
    let star = spec.full_health();
    let profiles = d
        .iter()
        .map(|p| Profile::new(star.clone(), 1.0, hpye(p, spec)?.years()))
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(profiles)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}

/// Ratio of marginal social values of lifetime for two individuals at full
/// health and productivity, `(t2 / t1)^(1 - gamma)`.
pub fn marginal_priority_ratio(t1: f64, t2: f64, gamma: f64) -> Result<f64> {
    for t in [t1, t2] {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::NonPositiveLifetime(t));
        }
    }
    check_gamma(gamma)?;
    Ok(pow0(t2 / t1, 1.0 - gamma))
}

/// Social value `(t + delta)^gamma - t^gamma` of a finite lifetime gain.
pub fn bounded_gain_check(t: f64, delta: f64, gamma: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeOrNonFiniteLifetime(t));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            reason: "gain must be positive",
        });
    }
    check_gamma(gamma)?;
    Ok(pow0(t + delta, gamma) - pow0(t, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example1;
    use crate::model::{validate_profile, Verdict};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hpye_examples() {
        let vs = example1::value_set();
        let qaly = EvalSpec::power_qaly(0.5, vs.clone()).unwrap();
        let p = validate_profile("11211", 1.0, 10.0).unwrap();
        // 0.95^2 * 10
        assert!(close(hpye(&p, &qaly).unwrap().years(), 9.025, 1e-12));

        let star = validate_profile("11111", 1.0, 40.0).unwrap();
        for spec in example1::all_families(0.5) {
            assert_eq!(
                hpye(&star, &spec).unwrap().years(),
                40.0,
                "{}",
                spec.describe()
            );
        }

        let paly = EvalSpec::power_paly(0.5).unwrap();
        let idle = validate_profile("11211", 0.0, 20.0).unwrap();
        assert_eq!(hpye(&idle, &paly).unwrap().years(), 0.0);
    }

    #[test]
    fn hpye_requires_user_function() {
        let spec = EvalSpec::new(Family::Utilitarian { hpye: None }, None).unwrap();
        let p = validate_profile("11111", 1.0, 3.0).unwrap();
        assert!(matches!(hpye(&p, &spec), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn unknown_state() {
        let spec = EvalSpec::power_qaly(0.5, example1::value_set()).unwrap();
        let d = Distribution::new(vec![validate_profile("99999", 1.0, 3.0).unwrap()]).unwrap();
        assert_eq!(
            evaluate(&d, &spec),
            Err(Error::UnknownHealthState("99999".into()))
        );
    }

    #[test]
    fn example1_values() {
        let vs = example1::value_set();
        let omega = example1::omega();
        // sqrt(40) + 2 sqrt(5) + sqrt(20)
        let qaly = EvalSpec::power_qaly(0.5, vs.clone()).unwrap();
        assert!(close(evaluate(&omega, &qaly).unwrap(), 15.26883, 1e-5));
        // sqrt(40) + sqrt(5)
        let paly = EvalSpec::power_paly(0.5).unwrap();
        assert!(close(evaluate(&omega, &paly).unwrap(), 8.56062, 1e-5));
    }

    #[test]
    fn zero_lifetimes_evaluate_to_zero() {
        let d = Distribution::new(vec![
            validate_profile("11211", 0.3, 0.0).unwrap(),
            validate_profile("11111", 1.0, 0.0).unwrap(),
        ])
        .unwrap();
        for spec in example1::all_families(0.5) {
            if matches!(spec.family(), Family::Generalized { .. }) {
                continue;
            }
            assert_eq!(evaluate(&d, &spec).unwrap(), 0.0, "{}", spec.describe());
        }
    }

    #[test]
    fn bi_power_gap_is_positive() {
        let vs = example1::value_set();
        let spec = EvalSpec::bi_power_pqaly(0.5, 0.3, vs).unwrap();
        let gap = compare(&example1::omega(), &example1::phi(0.5), &spec)
            .unwrap()
            .gap;
        let closed_form = 0.5f64.powf(0.3) * (2.0 * 5f64.sqrt() - 0.95 * 10f64.sqrt());
        assert!(close(gap, closed_form, 1e-12));
        assert!(gap > 0.0);
    }

    #[test]
    fn compare_examples() {
        let vs = example1::value_set();
        let paly = EvalSpec::power_paly(0.5).unwrap();
        let r = compare(
            &example1::omega(),
            &example1::phi(std::f64::consts::FRAC_1_SQRT_2),
            &paly,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Indifferent);
        assert!(r.gap.abs() < 1e-12);

        let omega = example1::omega();
        let same = compare(&omega, &omega, &paly).unwrap();
        assert_eq!(same.verdict, Verdict::Indifferent);
        assert_eq!(same.gap, 0.0);

        let pq = EvalSpec::power_pqaly(0.5, vs).unwrap();
        let r = compare(&omega, &example1::phi(0.5), &pq).unwrap();
        assert_eq!(r.verdict, Verdict::AStrictlyPreferred);
        assert!(close(r.gap, 0.73397, 1e-4));
    }

    #[test]
    fn priority_ratio_examples() {
        assert_eq!(marginal_priority_ratio(7.0, 7.0, 0.4).unwrap(), 1.0);
        assert!(close(
            marginal_priority_ratio(1.0, 4.0, 0.5).unwrap(),
            2.0,
            1e-12
        ));
        assert!(close(
            marginal_priority_ratio(1e-8, 1.0, 0.5).unwrap(),
            1e4,
            1e-8
        ));
        assert_eq!(
            marginal_priority_ratio(0.0, 1.0, 0.5),
            Err(Error::NonPositiveLifetime(0.0))
        );
        assert!(marginal_priority_ratio(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn bounded_gain_examples() {
        assert!(close(
            bounded_gain_check(0.0, 9.0, 0.5).unwrap(),
            3.0,
            1e-12
        ));
        assert!(close(
            bounded_gain_check(16.0, 9.0, 0.5).unwrap(),
            1.0,
            1e-12
        ));
        assert!(close(
            bounded_gain_check(1e-12, 1.0, 0.5).unwrap(),
            1.0,
            1e-6
        ));
        assert!(bounded_gain_check(1.0, 0.0, 0.5).is_err());
        assert!(bounded_gain_check(-1.0, 1.0, 0.5).is_err());
    }
}
