//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown; exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hpye::axioms::{check_axiom, table1_matrix, AxiomId};
use hpye::eval::marginal_priority_ratio;
use hpye::threshold::solve;
use hpye::{
    compare, evaluate, example1, fixtures, hpye_equivalent, Distribution, EvalSpec, FreeParam,
    GapFunction, Profile, SolverOptions, Verdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn err(e: hpye::Error) -> String {
    e.to_string()
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let spec = EvalSpec::power_qaly(0.5, example1::value_set()).map_err(err)?;
    let p = std::f64::consts::FRAC_1_SQRT_2;
    let gf = GapFunction::new(example1::omega(), example1::phi(p), spec, FreeParam::Gamma)
        .map_err(err)?;
    let region = solve(&gf, SolverOptions::default()).map_err(err)?;
    within(start.elapsed(), Duration::from_secs(1))?;
    let roots: Vec<f64> = region.roots.iter().map(|r| r.theta).collect();
    ensure(roots.len() == 2, || {
        format!("expected two roots, got {roots:?}")
    })?;
    ensure(
        (round2(roots[0]) - 0.32).abs() < 1e-9 && (round2(roots[1]) - 0.68).abs() < 1e-9,
        || format!("roots {roots:?} do not round to 0.32 and 0.68"),
    )?;
    for &r in &roots {
        let gap = gf.gap(r).map_err(err)?;
        ensure(gap.abs() <= 1e-8, || format!("residual {gap:e} at {r}"))?;
    }
    // x = 2^gamma solves x^2 - 2.85 x + 2 = 0.
    let disc = (2.85f64 * 2.85 - 8.0).sqrt();
    let exact = [((2.85 - disc) / 2.0).log2(), ((2.85 + disc) / 2.0).log2()];
    for (r, e) in roots.iter().zip(exact) {
        ensure((r - e).abs() < 1e-9, || {
            format!("root {r} differs from analytic {e}")
        })?;
    }
    ensure(
        region.set.to_string() == "(0, 0.32193] U [0.67807, 1)",
        || format!("region {}", region.set),
    )?;
    Ok(format!(
        "gamma in {} (paper: (0,0.32] U [0.68,1))",
        region.set
    ))
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let p = std::f64::consts::FRAC_1_SQRT_2;
    let spec = EvalSpec::power_paly(0.5).map_err(err)?;
    let gf = GapFunction::new(example1::omega(), example1::phi(p), spec, FreeParam::Gamma)
        .map_err(err)?;
    let region = solve(&gf, SolverOptions::default()).map_err(err)?;
    within(start.elapsed(), Duration::from_secs(1))?;
    ensure(region.roots.len() == 1, || {
        format!("roots {:?}", region.roots)
    })?;
    let root = region.roots[0].theta;
    ensure((root - 0.5).abs() <= 1e-10, || format!("root {root}"))?;
    let iv = region.set.intervals();
    ensure(
        iv.len() == 1 && iv[0].lo == 0.0 && !iv[0].lo_closed && iv[0].hi_closed,
        || format!("region {}", region.set),
    )?;
    Ok(format!("gamma in {}, root {root:.12}", region.set))
}

fn criterion3() -> Outcome {
    let vs = example1::value_set();
    let (omega, phi) = (example1::omega(), example1::phi(0.5));
    let pq = compare(
        &omega,
        &phi,
        &EvalSpec::power_pqaly(0.5, vs.clone()).map_err(err)?,
    )
    .map_err(err)?;
    ensure(pq.verdict != Verdict::BStrictlyPreferred, || {
        format!("PQALY verdict {pq}")
    })?;
    ensure((pq.gap - 0.73397).abs() <= 1e-4, || {
        format!("PQALY gap {}", pq.gap)
    })?;

    let single_root = |spec: EvalSpec, param| -> Result<f64, String> {
        let gf = GapFunction::new(omega.clone(), phi.clone(), spec, param).map_err(err)?;
        let region = solve(&gf, SolverOptions::default()).map_err(err)?;
        ensure(region.roots.len() == 1, || {
            format!("{param}: roots {:?}", region.roots)
        })?;
        Ok(region.roots[0].theta)
    };
    let sigma = single_root(
        EvalSpec::qaly_paly(0.5, 0.5, vs.clone()).map_err(err)?,
        FreeParam::Sigma,
    )?;
    ensure((sigma - 0.90565).abs() <= 1e-4, || {
        format!("sigma* = {sigma}")
    })?;
    let delta = single_root(
        EvalSpec::qaly_pqaly(0.5, vs.with_convex_split(0.5).map_err(err)?).map_err(err)?,
        FreeParam::Delta,
    )?;
    ensure((delta - 0.91495).abs() <= 1e-4, || {
        format!("delta* = {delta}")
    })?;

    let bipower = EvalSpec::bi_power_pqaly(0.5, 0.5, vs).map_err(err)?;
    let mut min_gap = f64::INFINITY;
    for k in 1..=99 {
        let spec = bipower
            .with_param(FreeParam::Epsilon, k as f64 / 100.0)
            .map_err(err)?;
        min_gap = min_gap.min(compare(&omega, &phi, &spec).map_err(err)?.gap);
    }
    ensure(min_gap > 0.0, || format!("bi-power gap reaches {min_gap}"))?;
    Ok(format!(
        "PQALY gap {:.5}, sigma* {sigma:.5}, delta* {delta:.5}, min bi-power gap {min_gap:.5}",
        pq.gap
    ))
}

/// Expected YES/NO pattern, rows in `AxiomId` order without CONT, columns
/// E^g, E^γf, E^γφ, E^γq, E^γp, E^γpq, E^γσ, E^γrs, E^γε.
const TABLE1: [(AxiomId, [bool; 9]); 16] = {
    const Y: bool = true;
    const N: bool = false;
    [
        (AxiomId::Anon, [Y, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Sep, [Y, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Zero, [Y, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Fhps, [Y, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Lmfhp, [Y, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Pld, [Y, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Pdtfhp, [Y, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Tsifhp, [N, Y, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Tsi, [N, N, Y, Y, Y, Y, Y, Y, Y]),
        (AxiomId::Pi, [N, N, N, Y, N, N, N, N, N]),
        (AxiomId::Hi, [N, N, N, N, Y, N, N, N, N]),
        (AxiomId::Picht, [N, N, N, Y, Y, Y, Y, Y, N]),
        (AxiomId::Pict, [N, N, N, Y, Y, N, Y, N, N]),
        (AxiomId::Tiup, [N, N, N, N, Y, Y, N, N, Y]),
        (AxiomId::Psi, [N, N, N, Y, Y, Y, N, N, Y]),
        (AxiomId::Pdtfhct, [N, N, N, N, N, N, N, N, Y]),
    ]
};

fn criterion4() -> Outcome {
    let start = Instant::now();
    let specs = fixtures::table1_specs();
    let m = table1_matrix(&specs, &AxiomId::ALL, 10_000, 42).map_err(err)?;
    within(start.elapsed(), Duration::from_secs(60))?;
    let mut mismatches = Vec::new();
    for (axiom, row) in TABLE1 {
        for (col, &yes) in row.iter().enumerate() {
            let v = m.verdict(axiom, col).ok_or("missing cell")?;
            if v.holds() != yes {
                mismatches.push(format!("{axiom}/{}", m.columns[col]));
            }
            if let Some(w) = &v.counterexample {
                ensure(w.replay(&specs[col]).map_err(err)?.violated, || {
                    format!("{axiom}/{} witness does not replay", m.columns[col])
                })?;
            }
        }
    }
    ensure(mismatches.is_empty(), || {
        format!("cells differ: {mismatches:?}")
    })?;
    for col in 0..specs.len() {
        let cont = m.verdict(AxiomId::Cont, col).ok_or("missing CONT cell")?;
        ensure(cont.cell() == "heuristic-pass", || {
            format!("CONT/{} is {}", m.columns[col], cont.cell())
        })?;
    }
    Ok(format!(
        "16 x 9 cells match, CONT heuristic-pass, {:?}",
        start.elapsed()
    ))
}

fn random_distribution(rng: &mut ChaCha8Rng, states: &[hpye::HealthStateId]) -> Distribution {
    let n = rng.gen_range(1..=8);
    let profiles = (0..n)
        .map(|_| {
            let a = states[rng.gen_range(0..states.len())].clone();
            Profile::new(a, rng.gen(), rng.gen_range(0.0..80.0)).unwrap()
        })
        .collect();
    Distribution::new(profiles).unwrap()
}

fn power_specs(gamma: f64, epsilon: f64) -> Vec<EvalSpec> {
    let vs = fixtures::value_set();
    let phi = std::sync::Arc::new(hpye::weights::ProductWeight::new(
        vs.clone(),
        fixtures::convex_curve(),
    ));
    vec![
        EvalSpec::pq_power_lifetime(gamma, phi, Some(vs.clone())).unwrap(),
        EvalSpec::power_qaly(gamma, vs.clone()).unwrap(),
        EvalSpec::power_paly(gamma)
            .unwrap()
            .with_value_set(vs.clone())
            .unwrap(),
        EvalSpec::power_pqaly(gamma, vs.clone()).unwrap(),
        EvalSpec::qaly_paly(gamma, 0.3, vs.clone()).unwrap(),
        EvalSpec::qaly_pqaly(gamma, vs.clone()).unwrap(),
        EvalSpec::bi_power_pqaly(gamma, epsilon, vs).unwrap(),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let states = fixtures::value_set().states();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let gamma = rng.gen_range(0.05..0.95);
        let mut specs = power_specs(gamma, rng.gen_range(0.05..0.95));
        specs.extend(fixtures::table1_specs().into_iter().take(2));
        let spec = &specs[rng.gen_range(0..specs.len())];
        let d = random_distribution(&mut rng, &states);
        let e = evaluate(&d, spec).map_err(err)?;
        let e_star = evaluate(&hpye_equivalent(&d, spec).map_err(err)?, spec).map_err(err)?;
        if e != 0.0 || e_star != 0.0 {
            worst = worst.max(rel(e, e_star));
        }
    }
    ensure(worst <= 1e-12, || format!("worst relative error {worst:e}"))?;
    Ok(format!("1000 samples, worst relative error {worst:e}"))
}

fn criterion6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let states = fixtures::value_set().states();
    let (mut worst_t, mut worst_p): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let (gamma, epsilon) = (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
        let specs = power_specs(gamma, epsilon);
        let spec = &specs[rng.gen_range(0..specs.len())];
        let d = random_distribution(&mut rng, &states);
        let c = (rng.gen_range(-3.0f64..3.0)).exp();
        let scaled = evaluate(&d.scale_lifetimes(c).map_err(err)?, spec).map_err(err)?;
        let expected = c.powf(gamma) * evaluate(&d, spec).map_err(err)?;
        if scaled != 0.0 || expected != 0.0 {
            worst_t = worst_t.max(rel(scaled, expected));
        }

        let bipower = &specs[specs.len() - 1];
        let cp = rng.gen_range(0.01..1.0);
        let scaled = evaluate(&d.scale_productivities(cp).map_err(err)?, bipower).map_err(err)?;
        let expected = cp.powf(epsilon) * evaluate(&d, bipower).map_err(err)?;
        if scaled != 0.0 || expected != 0.0 {
            worst_p = worst_p.max(rel(scaled, expected));
        }
    }
    ensure(worst_t <= 1e-12, || {
        format!("lifetime scaling error {worst_t:e}")
    })?;
    ensure(worst_p <= 1e-12, || {
        format!("productivity scaling error {worst_p:e}")
    })?;
    Ok(format!(
        "1000 samples, worst errors {worst_t:e} (c^gamma), {worst_p:e} (c^epsilon)"
    ))
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = fixtures::linear_hpye();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (t1, t2) = (rng.gen_range(0.1..100.0), rng.gen_range(0.1..100.0));
        let gamma = rng.gen_range(0.05..0.95);
        let spec =
            EvalSpec::power_hpye(gamma, f.clone(), Some(fixtures::value_set())).map_err(err)?;
        let e = |a: f64, b: f64| {
            let d = Distribution::new(vec![
                hpye::model::validate_profile("11111", 1.0, a).unwrap(),
                hpye::model::validate_profile("11111", 1.0, b).unwrap(),
            ])
            .unwrap();
            evaluate(&d, &spec).unwrap()
        };
        let (h1, h2) = (1e-5 * t1, 1e-5 * t2);
        let d1 = (e(t1 + h1, t2) - e(t1 - h1, t2)) / (2.0 * h1);
        let d2 = (e(t1, t2 + h2) - e(t1, t2 - h2)) / (2.0 * h2);
        let ratio = marginal_priority_ratio(t1, t2, gamma).map_err(err)?;
        worst = worst.max(rel(d1 / d2, ratio));
    }
    ensure(worst <= 1e-4, || format!("worst relative error {worst:e}"))?;
    Ok(format!("500 samples, worst relative error {worst:e}"))
}

fn criterion8() -> Outcome {
    let pd = check_axiom(
        AxiomId::Pdtfhp,
        &fixtures::utilitarian_identity(),
        1_000,
        42,
    )
    .map_err(err)?;
    ensure(!pd.holds(), || {
        "no PDTFHP counterexample for g = identity".into()
    })?;
    let ts = check_axiom(AxiomId::Tsifhp, &fixtures::log_aggregator(), 10_000, 42).map_err(err)?;
    ensure(!ts.holds(), || {
        "no TSIFHP counterexample for g = ln(1+x)".into()
    })?;
    let at =
        |v: &hpye::axioms::AxiomVerdict| v.counterexample.as_ref().map(|w| w.trial).unwrap_or(0);
    Ok(format!(
        "PDTFHP witness at trial {}, TSIFHP witness at trial {}",
        at(&pd),
        at(&ts)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 PowerQALY gamma region", criterion1),
        ("2 PowerPALY gamma region", criterion2),
        ("3 family comparisons at gamma = p = 0.5", criterion3),
        ("4 compliance matrix", criterion4),
        ("5 HPYE equivalence identity", criterion5),
        ("6 homogeneity", criterion6),
        ("7 marginal priority ratio", criterion7),
        ("8 planted defects", criterion8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
