//! Seeded random instances for each axiom.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AxiomId, Claim};
use crate::error::Result;
use crate::model::{Distribution, HealthStateId, Profile};

/// Probability of a zero lifetime or of each productivity atom.
const ATOM: f64 = 0.1;
const MIN_LIFETIME: f64 = 1e-3;
const MAX_LIFETIME: f64 = 100.0;
/// Lower lifetime bound for the individuals whose strict gain is tested.
const STRICT_MIN_LIFETIME: f64 = 0.1;
/// Minimal ratio `t_j / t_i` for a lifetime transfer pair.
const TRANSFER_RATIO: f64 = 1.25;
/// Minimal productivity gap for a productivity transfer pair.
const TRANSFER_GAP: f64 = 0.1;
/// Fraction cut from each end of an open interval before sampling inside it.
const SHRINK: f64 = 0.01;
/// Number of steps in a continuity sequence.
pub(crate) const SEQUENCE_STEPS: u32 = 60;
/// Perturbations shrink by this factor per step. A fast rate matters for
/// Hölder-type terms such as `p^0.3` near zero, whose values converge far
/// more slowly than their arguments.
const SEQUENCE_RATE: f64 = 1.0 / 16.0;

/// Mixes a master seed with an axiom index and a trial counter, so that
/// each trial owns an independent stream regardless of execution order.
pub(crate) fn trial_seed(master: u64, axiom: AxiomId, trial: u64) -> u64 {
    let stream = splitmix64(master ^ splitmix64(axiom as u64 + 1));
    splitmix64(stream.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generated instance: the claim to check plus a note on the witnesses drawn.
pub(crate) struct Instance {
    pub claim: Claim,
    pub detail: String,
}

pub(crate) struct Sampler<'a> {
    rng: ChaCha8Rng,
    states: &'a [HealthStateId],
    star: &'a HealthStateId,
}

impl<'a> Sampler<'a> {
    pub fn new(seed: u64, states: &'a [HealthStateId], star: &'a HealthStateId) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            states,
            star,
        }
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (self.rng.gen_range(lo.ln()..=hi.ln())).exp()
    }

    fn inside(&mut self, lo: f64, hi: f64) -> f64 {
        let margin = SHRINK * (hi - lo);
        self.rng.gen_range(lo + margin..=hi - margin)
    }

    fn size(&mut self) -> usize {
        self.rng.gen_range(2..=6)
    }

    fn lifetime(&mut self) -> f64 {
        if self.rng.gen_bool(ATOM) {
            0.0
        } else {
            self.log_uniform(MIN_LIFETIME, MAX_LIFETIME)
        }
    }

    fn productivity(&mut self) -> f64 {
        let u: f64 = self.rng.gen();
        if u < ATOM {
            0.0
        } else if u < 2.0 * ATOM {
            1.0
        } else {
            self.rng.gen()
        }
    }

    fn state(&mut self) -> HealthStateId {
        self.states
            .choose(&mut self.rng)
            .expect("non-empty state universe")
            .clone()
    }

    fn other_state(&mut self, not: &HealthStateId) -> HealthStateId {
        loop {
            let a = self.state();
            if a != *not {
                return a;
            }
        }
    }

    fn profile(&mut self) -> Result<Profile> {
        let a = self.state();
        let p = self.productivity();
        let t = self.lifetime();
        Profile::new(a, p, t)
    }

    fn distribution(&mut self, n: usize) -> Result<Distribution> {
        Distribution::new((0..n).map(|_| self.profile()).collect::<Result<_>>()?)
    }

    fn full_health_distribution(&mut self, n: usize) -> Result<Distribution> {
        let profiles = (0..n)
            .map(|_| {
                let t = self.lifetime();
                Profile::new(self.star.clone(), 1.0, t)
            })
            .collect::<Result<_>>()?;
        Distribution::new(profiles)
    }

    fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn pair(&mut self, n: usize) -> (usize, usize) {
        let i = self.index(n);
        let mut j = self.index(n - 1);
        if j >= i {
            j += 1;
        }
        (i, j)
    }

    pub fn instance(&mut self, axiom: AxiomId) -> Result<Option<Instance>> {
        let n = self.size();
        let inst = match axiom {
            AxiomId::Anon => {
                let d = self.distribution(n)?;
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut self.rng);
                Instance {
                    detail: format!("permutation {order:?}"),
                    claim: Claim::Indifferent {
                        right: d.permuted(&order),
                        left: d,
                    },
                }
            }
            AxiomId::Sep => {
                let d = self.distribution(n)?;
                let d2 = self.distribution(n)?;
                let mut subset: Vec<bool> = (0..n).map(|_| self.rng.gen_bool(0.5)).collect();
                if subset.iter().all(|&b| b) || subset.iter().all(|&b| !b) {
                    let k = self.index(n);
                    subset[k] = !subset[k];
                }
                let mix = |inside: &Distribution, outside: &Distribution| {
                    let profiles = (0..n)
                        .map(|k| if subset[k] { inside } else { outside }.profiles()[k].clone())
                        .collect();
                    Distribution::new(profiles).expect("non-empty")
                };
                let members: Vec<usize> = (0..n).filter(|&k| subset[k]).collect();
                Instance {
                    detail: format!("S = {members:?}"),
                    claim: Claim::SameRanking {
                        left: d.clone(),
                        right: mix(&d2, &d),
                        left_mapped: mix(&d, &d2),
                        right_mapped: d2,
                    },
                }
            }
            AxiomId::Cont => return self.continuity(n),
            AxiomId::Zero => {
                let i = self.index(n);
                let d = self.distribution(n)?;
                let d = d.with_profile(i, d.profiles()[i].with_lifetime(0.0)?);
                let replaced = Profile::new(self.state(), self.productivity(), 0.0)?;
                Instance {
                    detail: format!("i = {i}"),
                    claim: Claim::Indifferent {
                        right: d.with_profile(i, replaced),
                        left: d,
                    },
                }
            }
            AxiomId::Fhps => {
                let i = self.index(n);
                let d = self.distribution(n)?;
                let di = &d.profiles()[i];
                let (better, what) = if self.rng.gen_bool(0.5) {
                    (di.with_state(self.star.clone()), "state -> full health")
                } else {
                    (di.with_productivity(1.0)?, "productivity -> 1")
                };
                Instance {
                    detail: format!("i = {i}, {what}"),
                    claim: Claim::WeaklyPreferred {
                        better: d.with_profile(i, better),
                        worse: d,
                    },
                }
            }
            AxiomId::Lmfhp => {
                let i = self.index(n);
                let d = self.distribution(n)?;
                let t = self.log_uniform(MIN_LIFETIME, MAX_LIFETIME);
                let shorter = t * self.rng.gen_range(0.0..=1.0 - SHRINK);
                let star = |t| Profile::new(self.star.clone(), 1.0, t);
                Instance {
                    detail: format!("i = {i}, t = {t}, t' = {shorter}"),
                    claim: Claim::StrictlyPreferred {
                        better: d.with_profile(i, star(t)?),
                        worse: d.with_profile(i, star(shorter)?),
                    },
                }
            }
            AxiomId::Pld => {
                let i = self.index(n);
                let d = self.distribution(n)?;
                let zeroed = d.profiles()[i].with_lifetime(0.0)?;
                Instance {
                    detail: format!("i = {i}"),
                    claim: Claim::WeaklyPreferred {
                        worse: d.with_profile(i, zeroed),
                        better: d,
                    },
                }
            }
            AxiomId::Pdtfhp => {
                let (i, j) = self.pair(n);
                let d = self.full_health_distribution(n)?;
                let (ti, tj) = self.transfer_lifetimes();
                let tau = self.inside(0.0, (tj - ti) / 2.0);
                let star = |t| Profile::new(self.star.clone(), 1.0, t);
                let d = d.with_profile(i, star(ti)?).with_profile(j, star(tj)?);
                Instance {
                    detail: format!("i = {i}, j = {j}, tau = {tau}"),
                    claim: Claim::StrictlyPreferred {
                        better: d
                            .with_profile(i, star(ti + tau)?)
                            .with_profile(j, star(tj - tau)?),
                        worse: d,
                    },
                }
            }
            AxiomId::Tsifhp | AxiomId::Tsi => {
                let (d, d2) = if axiom == AxiomId::Tsifhp {
                    (
                        self.full_health_distribution(n)?,
                        self.full_health_distribution(n)?,
                    )
                } else {
                    (self.distribution(n)?, self.distribution(n)?)
                };
                let c = self.log_uniform(1e-2, 1e2);
                Instance {
                    detail: format!("c = {c}"),
                    claim: Claim::SameRanking {
                        left_mapped: d.scale_lifetimes(c)?,
                        right_mapped: d2.scale_lifetimes(c)?,
                        left: d,
                        right: d2,
                    },
                }
            }
            AxiomId::Psi => {
                let d = self.distribution(n)?;
                let d2 = self.distribution(n)?;
                let c = self.inside(0.0, 1.0);
                Instance {
                    detail: format!("c = {c}"),
                    claim: Claim::SameRanking {
                        left_mapped: d.scale_productivities(c)?,
                        right_mapped: d2.scale_productivities(c)?,
                        left: d,
                        right: d2,
                    },
                }
            }
            AxiomId::Pi => {
                let i = self.index(n);
                let d = self.distribution(n)?;
                let p = d.profiles()[i].productivity();
                let mut p2 = self.productivity();
                while p2 == p {
                    p2 = self.productivity();
                }
                let changed = d.profiles()[i].with_productivity(p2)?;
                Instance {
                    detail: format!("i = {i}, p' = {p2}"),
                    claim: Claim::Indifferent {
                        right: d.with_profile(i, changed),
                        left: d,
                    },
                }
            }
            AxiomId::Hi => {
                let i = self.index(n);
                let d = self.distribution(n)?;
                let a2 = self.other_state(d.profiles()[i].state());
                let changed = d.profiles()[i].with_state(a2.clone());
                Instance {
                    detail: format!("i = {i}, a' = {a2}"),
                    claim: Claim::Indifferent {
                        right: d.with_profile(i, changed),
                        left: d,
                    },
                }
            }
            AxiomId::Picht | AxiomId::Pict => {
                let (i, j) = self.pair(n);
                let d = self.distribution(n)?;
                let t = self.lifetime();
                let ai = self.state();
                let aj = if axiom == AxiomId::Picht {
                    ai.clone()
                } else {
                    self.state()
                };
                let (pi, pj) = loop {
                    let (x, y) = (self.productivity(), self.productivity());
                    if x.max(y) < 1.0 {
                        break (x, y);
                    }
                };
                let c = self.inside(0.0, 1.0 - pi.max(pj));
                let put = |pi: f64, pj: f64| -> Result<Distribution> {
                    Ok(d.with_profile(i, Profile::new(ai.clone(), pi, t)?)
                        .with_profile(j, Profile::new(aj.clone(), pj, t)?))
                };
                Instance {
                    detail: format!("i = {i}, j = {j}, c = {c}"),
                    claim: Claim::Indifferent {
                        left: put((pi + c).min(1.0), pj)?,
                        right: put(pi, (pj + c).min(1.0))?,
                    },
                }
            }
            AxiomId::Tiup => {
                let i = self.index(n);
                let d = self.distribution(n)?;
                let d = d.with_profile(i, d.profiles()[i].with_productivity(0.0)?);
                let t2 = self.lifetime();
                let changed = d.profiles()[i].with_lifetime(t2)?;
                Instance {
                    detail: format!("i = {i}, t' = {t2}"),
                    claim: Claim::Indifferent {
                        right: d.with_profile(i, changed),
                        left: d,
                    },
                }
            }
            AxiomId::Pdtfhct => {
                let (i, j) = self.pair(n);
                let profiles = (0..n)
                    .map(|_| {
                        let p = self.productivity();
                        let t = self.lifetime();
                        Profile::new(self.star.clone(), p, t)
                    })
                    .collect::<Result<_>>()?;
                let d = Distribution::new(profiles)?;
                let t = self.log_uniform(STRICT_MIN_LIFETIME, MAX_LIFETIME);
                let (pi, pj) = loop {
                    let (x, y) = (self.productivity(), self.productivity());
                    let (lo, hi) = (x.min(y), x.max(y));
                    if hi - lo >= TRANSFER_GAP {
                        break (lo, hi);
                    }
                };
                let rho = self.inside(0.0, (pj - pi) / 2.0);
                let put = |pi: f64, pj: f64| -> Result<Distribution> {
                    Ok(d.with_profile(i, Profile::new(self.star.clone(), pi, t)?)
                        .with_profile(j, Profile::new(self.star.clone(), pj, t)?))
                };
                Instance {
                    detail: format!("i = {i}, j = {j}, t = {t}, rho = {rho}"),
                    claim: Claim::StrictlyPreferred {
                        better: put(pi + rho, pj - rho)?,
                        worse: put(pi, pj)?,
                    },
                }
            }
        };
        Ok(Some(inst))
    }

    /// Lifetimes `t_i < t_j` for a Pigou-Dalton transfer, separated by at
    /// least the factor `TRANSFER_RATIO`.
    fn transfer_lifetimes(&mut self) -> (f64, f64) {
        loop {
            let draw = |s: &mut Self| {
                if s.rng.gen_bool(ATOM) {
                    0.0
                } else {
                    s.log_uniform(STRICT_MIN_LIFETIME, MAX_LIFETIME)
                }
            };
            let (x, y) = (draw(self), draw(self));
            let (lo, hi) = (x.min(y), x.max(y));
            if hi > 0.0 && hi >= TRANSFER_RATIO * lo {
                return (lo, hi);
            }
        }
    }

    /// Sequence `d^(k) -> d` varying productivities and lifetimes only.
    fn continuity(&mut self, n: usize) -> Result<Option<Instance>> {
        let limit = self.distribution(n)?;
        let other = self.distribution(n)?;
        let steps: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                (
                    self.rng.gen_range(-0.5..=0.5),
                    self.rng.gen_range(-1.0..=1.0),
                )
            })
            .collect();
        let sequence = (1..=SEQUENCE_STEPS)
            .map(|k| {
                let scale = SEQUENCE_RATE.powi(k as i32);
                let profiles = limit
                    .iter()
                    .zip(&steps)
                    .map(|(p, &(dp, dt))| {
                        let pk = (p.productivity() + dp * scale).clamp(0.0, 1.0);
                        let tk = (p.lifetime() + dt * scale * p.lifetime().max(1.0)).max(0.0);
                        Profile::new(p.state().clone(), pk, tk)
                    })
                    .collect::<Result<_>>()?;
                Distribution::new(profiles)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(Instance {
            detail: format!("{SEQUENCE_STEPS}-step sequence"),
            claim: Claim::Limit {
                sequence,
                limit,
                other,
            },
        }))
    }
}
