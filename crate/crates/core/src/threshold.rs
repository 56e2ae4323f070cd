//! Parameter regions on which one distribution is weakly preferred to another.
//!
//! The gap `theta -> E_theta[A] - E_theta[B]` is sampled on a uniform grid,
//! every change of weak preference is bracketed and bisected, and local
//! extrema of the sampled gap are refined to catch tangential roots and
//! pairs of roots that fall between two grid points. The whole procedure
//! is repeated on a grid twice as fine; a different number of roots is
//! reported as [`Error::RootCountUnstable`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::interval::{Interval, IntervalSet};
use crate::model::{indifference_tolerance, Distribution};
use crate::spec::{EvalSpec, FreeParam, ParamRange};

/// Offset used in place of open range endpoints.
pub const OPEN_ENDPOINT_SENTINEL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub grid_points: usize,
    /// Bracket width at which bisection stops.
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_points: 1024,
            tol: 1e-10,
        }
    }
}

/// `theta -> E_theta[a] - E_theta[b]` for one free parameter of `spec`.
#[derive(Debug, Clone)]
pub struct GapFunction {
    a: Distribution,
    b: Distribution,
    spec: EvalSpec,
    param: FreeParam,
}

impl GapFunction {
    /// Fails if `param` is not a parameter of `spec`'s family.
    pub fn new(a: Distribution, b: Distribution, spec: EvalSpec, param: FreeParam) -> Result<Self> {
        spec.with_param(param, 0.5)?;
        Ok(GapFunction { a, b, spec, param })
    }

    pub fn param(&self) -> FreeParam {
        self.param
    }

    pub fn range(&self) -> ParamRange {
        self.param.range()
    }

    pub fn spec(&self) -> &EvalSpec {
        &self.spec
    }

    /// Same comparison with the roles of `a` and `b` exchanged.
    pub fn swapped(&self) -> GapFunction {
        GapFunction {
            a: self.b.clone(),
            b: self.a.clone(),
            spec: self.spec.clone(),
            param: self.param,
        }
    }

    fn effective(&self, theta: f64) -> Result<f64> {
        let r = self.range();
        if r.contains(theta) {
            Ok(theta)
        } else if theta == r.lo && !r.lo_closed {
            Ok(r.lo + OPEN_ENDPOINT_SENTINEL)
        } else if theta == r.hi && !r.hi_closed {
            Ok(r.hi - OPEN_ENDPOINT_SENTINEL)
        } else {
            Err(Error::ParameterOutOfRange {
                param: self.param.to_string(),
                value: theta,
            })
        }
    }

    /// `(E_theta[a], E_theta[b])`.
    pub fn values(&self, theta: f64) -> Result<(f64, f64)> {
        let spec = self.spec.with_param(self.param, self.effective(theta)?)?;
        Ok((evaluate(&self.a, &spec)?, evaluate(&self.b, &spec)?))
    }

    pub fn gap(&self, theta: f64) -> Result<f64> {
        let (ea, eb) = self.values(theta)?;
        Ok(ea - eb)
    }

    /// Gap and its indifference tolerance.
    fn sample(&self, theta: f64) -> Result<Sample> {
        let (ea, eb) = self.values(theta)?;
        Ok(Sample {
            theta,
            gap: ea - eb,
            tol: indifference_tolerance(ea, eb),
        })
    }
}

/// Left-minus-right gap of the comparison at `theta`.
pub fn preference_gap(gf: &GapFunction, theta: f64) -> Result<f64> {
    gf.gap(theta)
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    theta: f64,
    gap: f64,
    tol: f64,
}

impl Sample {
    fn weak(&self) -> bool {
        self.gap >= -self.tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    /// Weak preference for `a` starts here.
    Rising,
    /// Weak preference for `a` ends here.
    Falling,
    /// The gap touches zero from below without crossing.
    Touch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub theta: f64,
    pub kind: RootKind,
    pub gap: f64,
}

/// Solver output: the weak-preference region and the roots bounding it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub param: FreeParam,
    pub set: IntervalSet,
    pub roots: Vec<Root>,
}

/// `{theta : E_theta[a] >= E_theta[b]}` over the parameter's admissible range.
pub fn solve_preference_region(
    gf: &GapFunction,
    grid_points: usize,
    tol: f64,
) -> Result<IntervalSet> {
    Ok(solve(gf, SolverOptions { grid_points, tol })?.set)
}

/// Like [`solve_preference_region`] but also returns the refined roots.
pub fn solve(gf: &GapFunction, opts: SolverOptions) -> Result<Region> {
    if opts.grid_points < 64 {
        return Err(Error::InvalidSolverSetting(
            "grid_points must be at least 64",
        ));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidSolverSetting("tol must be positive"));
    }
    let coarse = find_roots(gf, opts.grid_points, opts.tol)?;
    let fine = find_roots(gf, 2 * opts.grid_points, opts.tol)?;
    if coarse.roots.len() != fine.roots.len() {
        return Err(Error::RootCountUnstable {
            coarse: coarse.roots.len(),
            fine: fine.roots.len(),
        });
    }
    let set = assemble(gf.range(), coarse.starts_weak, &coarse.roots);
    Ok(Region {
        param: gf.param,
        set,
        roots: coarse.roots,
    })
}

struct Scan {
    starts_weak: bool,
    roots: Vec<Root>,
}

fn grid(gf: &GapFunction, n: usize) -> Result<Vec<Sample>> {
    let r = gf.range();
    let lo = if r.lo_closed {
        r.lo
    } else {
        r.lo + OPEN_ENDPOINT_SENTINEL
    };
    let hi = if r.hi_closed {
        r.hi
    } else {
        r.hi - OPEN_ENDPOINT_SENTINEL
    };
    (0..n)
        .map(|i| {
            let theta = if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            };
            gf.sample(theta)
        })
        .collect()
}

fn find_roots(gf: &GapFunction, n: usize, tol: f64) -> Result<Scan> {
    let s = grid(gf, n)?;
    let mut roots = Vec::new();
    for i in 0..n - 1 {
        if s[i].weak() != s[i + 1].weak() {
            let theta = locate_transition(gf, &s, i, tol)?;
            let kind = if s[i + 1].weak() {
                RootKind::Rising
            } else {
                RootKind::Falling
            };
            roots.push(Root {
                theta,
                kind,
                gap: gf.gap(theta)?,
            });
        }
    }
    for i in 1..n - 1 {
        let (l, m, r) = (s[i - 1], s[i], s[i + 1]);
        if l.weak() != m.weak() || m.weak() != r.weak() {
            continue;
        }
        if !m.weak() && m.gap >= l.gap && m.gap > r.gap {
            // Negative run with a local maximum: look for a touch or a
            // hidden excursion above zero.
            let peak = golden_section(gf, l.theta, r.theta, true)?;
            if peak.gap > peak.tol {
                let a = bisect(gf, l.theta, peak.theta, tol, |x| x.gap >= 0.0)?;
                let b = bisect(gf, peak.theta, r.theta, tol, |x| x.gap < 0.0)?;
                roots.push(Root {
                    theta: a,
                    kind: RootKind::Rising,
                    gap: gf.gap(a)?,
                });
                roots.push(Root {
                    theta: b,
                    kind: RootKind::Falling,
                    gap: gf.gap(b)?,
                });
            } else if peak.weak() {
                roots.push(Root {
                    theta: peak.theta,
                    kind: RootKind::Touch,
                    gap: peak.gap,
                });
            }
        } else if m.weak() && m.gap > m.tol && m.gap <= l.gap && m.gap < r.gap {
            let dip = golden_section(gf, l.theta, r.theta, false)?;
            if !dip.weak() {
                let a = bisect(gf, l.theta, dip.theta, tol, |x| x.gap < 0.0)?;
                let b = bisect(gf, dip.theta, r.theta, tol, |x| x.gap >= 0.0)?;
                roots.push(Root {
                    theta: a,
                    kind: RootKind::Falling,
                    gap: gf.gap(a)?,
                });
                roots.push(Root {
                    theta: b,
                    kind: RootKind::Rising,
                    gap: gf.gap(b)?,
                });
            }
        }
    }
    roots.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(Scan {
        starts_weak: s[0].weak(),
        roots,
    })
}

/// Root between grid points `i` and `i + 1`, whose weak-preference flags differ.
///
/// Bisection runs on the exact sign of the gap when the bracket ends
/// disagree on it; otherwise a grid point sits inside the indifference band
/// and the bracket is widened by one step to reach an exact sign change.
fn locate_transition(gf: &GapFunction, s: &[Sample], i: usize, tol: f64) -> Result<f64> {
    let sign = |x: &Sample| x.gap >= 0.0;
    let candidates = [
        (i, i + 1),
        (i.saturating_sub(1), i + 1),
        (i, (i + 2).min(s.len() - 1)),
    ];
    for (a, b) in candidates {
        if sign(&s[a]) != sign(&s[b]) {
            let left_sign = sign(&s[a]);
            return bisect(gf, s[a].theta, s[b].theta, tol, move |x| {
                sign(x) == left_sign
            });
        }
    }
    let left_weak = s[i].weak();
    bisect(gf, s[i].theta, s[i + 1].theta, tol, move |x| {
        x.weak() == left_weak
    })
}

/// Shrinks `[lo, hi]` to width `tol` around the point where `left_side`
/// stops holding; `left_side(lo)` is assumed true and `left_side(hi)` false.
fn bisect(
    gf: &GapFunction,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    left_side: impl Fn(&Sample) -> bool,
) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if left_side(&gf.sample(mid)?) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Maximizes (or minimizes) the gap on `[a, b]`.
fn golden_section(gf: &GapFunction, mut a: f64, mut b: f64, maximize: bool) -> Result<Sample> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let score = |x: &Sample| if maximize { x.gap } else { -x.gap };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = gf.sample(c)?;
    let mut fd = gf.sample(d)?;
    for _ in 0..100 {
        if b - a < 1e-14 {
            break;
        }
        if score(&fc) > score(&fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gf.sample(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gf.sample(d)?;
        }
    }
    Ok(if score(&fc) > score(&fd) { fc } else { fd })
}

/// Sweeps the sorted roots from the lower end of `range`.
fn assemble(range: ParamRange, starts_weak: bool, roots: &[Root]) -> IntervalSet {
    let mut out = Vec::new();
    let mut open_at: Option<(f64, bool)> = starts_weak.then_some((range.lo, range.lo_closed));
    for root in roots {
        match root.kind {
            RootKind::Rising => open_at = Some((root.theta, true)),
            RootKind::Falling => {
                let (lo, lo_closed) = open_at.take().unwrap_or((range.lo, range.lo_closed));
                out.push(Interval {
                    lo,
                    lo_closed,
                    hi: root.theta,
                    hi_closed: true,
                });
            }
            RootKind::Touch => out.push(Interval {
                lo: root.theta,
                lo_closed: true,
                hi: root.theta,
                hi_closed: true,
            }),
        }
    }
    if let Some((lo, lo_closed)) = open_at {
        out.push(Interval {
            lo,
            lo_closed,
            hi: range.hi,
            hi_closed: range.hi_closed,
        });
    }
    IntervalSet::from_intervals(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example1;

    fn gf(spec: EvalSpec, p: f64, param: FreeParam) -> GapFunction {
        GapFunction::new(example1::omega(), example1::phi(p), spec, param).unwrap()
    }

    #[test]
    fn gap_at_grid_points() {
        let qaly = EvalSpec::power_qaly(0.5, example1::value_set()).unwrap();
        let g = gf(qaly, std::f64::consts::FRAC_1_SQRT_2, FreeParam::Gamma);
        // 15.26883 - 15.33705
        assert!((preference_gap(&g, 0.5).unwrap() + 0.06822).abs() < 1e-5);
        assert!(matches!(
            preference_gap(&g, 1.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(preference_gap(&g, 0.0).unwrap().is_finite());
    }

    #[test]
    fn identical_distributions_cover_the_range() {
        let omega = example1::omega();
        let spec = EvalSpec::power_paly(0.5).unwrap();
        let g = GapFunction::new(omega.clone(), omega, spec, FreeParam::Gamma).unwrap();
        let set = solve_preference_region(&g, 1024, 1e-10).unwrap();
        assert_eq!(set, IntervalSet::full(FreeParam::Gamma.range()));
        assert_eq!(preference_gap(&g, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_settings() {
        let spec = EvalSpec::power_paly(0.5).unwrap();
        let g = gf(spec, 0.5, FreeParam::Gamma);
        assert!(solve_preference_region(&g, 10, 1e-10).is_err());
        assert!(solve_preference_region(&g, 128, 0.0).is_err());
    }

    #[test]
    fn wrong_parameter_for_family() {
        let spec = EvalSpec::power_paly(0.5).unwrap();
        assert!(matches!(
            GapFunction::new(
                example1::omega(),
                example1::phi(0.5),
                spec,
                FreeParam::Sigma
            ),
            Err(Error::UnsupportedParameter { .. })
        ));
    }
}
