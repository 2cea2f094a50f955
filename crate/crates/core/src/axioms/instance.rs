//! Concrete axiom instances: generation, evaluation against a rule, and
//! greedy shrinking.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orderings::{DifferenceProfile, Direction, Verdict};
use crate::rational::{frac, int, Rational};
use crate::stream::format::rational_str;
use crate::stream::{EpStream, FinitePermutation, FixedStepPermutation};

use super::gen::{positive_steps, random_bijection, random_ep_over, shift_amounts};
use super::rules::Rule;
use super::{Axiom, HarnessConfig, PeriodicReading};

/// Largest generation index drawn for one-generation and transfer
/// parameters.
const INDEX_MAX: u64 = 10;
/// Largest starting point `T*` drawn for the consistency axioms.
const START_MAX: u64 = 8;
/// Largest step drawn for fixed-step replication consistency.
const STEP_MAX: u64 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    /// `u` against `u^pi`.
    Permuted { u: EpStream, pi: FinitePermutation },
    /// `u` against its blockwise permutation.
    BlockPermuted {
        u: EpStream,
        pi: FixedStepPermutation,
    },
    /// `u = v + epsilon 1 + noise` with `noise >= 0`, against `v`.
    Pareto {
        v: EpStream,
        #[serde(with = "rational_str")]
        epsilon: Rational,
        noise: EpStream,
    },
    /// `(u, v)` against `(u + alpha 1_t, v + alpha 1_t)`.
    Indicator {
        u: EpStream,
        v: EpStream,
        t: u64,
        #[serde(with = "rational_str")]
        alpha: Rational,
    },
    /// `(u, v)` against `(u + w, v + w)`.
    Additive {
        u: EpStream,
        v: EpStream,
        w: EpStream,
    },
    /// `u + epsilon 1_i` against `u + epsilon 1_j`.
    Equity {
        u: EpStream,
        i: u64,
        j: u64,
        #[serde(with = "rational_str")]
        epsilon: Rational,
    },
    /// `u = (v_1 - gap, v_2 + epsilon, v_3 + epsilon, ..)` against `v`.
    NonSubstitution {
        v: EpStream,
        #[serde(with = "rational_str")]
        gap: Rational,
        #[serde(with = "rational_str")]
        epsilon: Rational,
    },
    /// The sequence `u + w / k` approaching `u`, compared with `v` from above
    /// (`upper`) or below.
    Approximation {
        u: EpStream,
        v: EpStream,
        w: EpStream,
        upper: bool,
    },
    /// Mean or replication consistency from `T* = start`.
    Consistency {
        u: EpStream,
        v: EpStream,
        start: u64,
    },
    /// Fixed-step replication consistency with step `k`.
    StepConsistency { u: EpStream, v: EpStream, k: u64 },
    /// `u` against `transfer(u, i, j, beta)`.
    Transfer {
        u: EpStream,
        i: u64,
        j: u64,
        #[serde(with = "rational_str")]
        beta: Rational,
    },
    /// `[u_1..u_T]_rep` against the replication of its transfer, `T = period`.
    PeriodicTransfer {
        u: EpStream,
        period: u64,
        s: u64,
        t: u64,
        #[serde(with = "rational_str")]
        beta: Rational,
    },
}

/// One labelled fact recorded while checking an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub failed: bool,
    /// The axiom's premise did not hold, so the instance says nothing.
    pub vacuous: bool,
    pub evidence: Vec<Evidence>,
}

impl Outcome {
    fn note(&mut self, label: impl Into<String>, value: impl ToString) {
        self.evidence.push(Evidence {
            label: label.into(),
            value: value.to_string(),
        });
    }

    fn require(mut self, ok: bool) -> Self {
        self.failed = !ok;
        self
    }

    fn conditional(mut self, premise: bool, conclusion: bool) -> Self {
        self.note("premise", premise);
        self.vacuous = !premise;
        self.failed = premise && !conclusion;
        self
    }
}

fn pick<'a>(rng: &mut impl Rng, corpus: &'a [EpStream]) -> &'a EpStream {
    &corpus[rng.random_range(0..corpus.len())]
}

fn pick_value(rng: &mut impl Rng, values: &[Rational]) -> Rational {
    values[rng.random_range(0..values.len())].clone()
}

fn distinct_pair(rng: &mut impl Rng, max: u64) -> (u64, u64) {
    let i = rng.random_range(1..=max);
    let mut j = rng.random_range(1..max);
    if j >= i {
        j += 1;
    }
    (i, j)
}

fn nonzero_amounts() -> Vec<Rational> {
    shift_amounts()
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect()
}

impl Instance {
    pub fn generate(
        axiom: Axiom,
        corpus: &[EpStream],
        rng: &mut impl Rng,
        config: &HarnessConfig,
    ) -> Instance {
        match axiom {
            Axiom::FiniteAnonymity => {
                let u = pick(rng, corpus).clone();
                let n = rng.random_range(2..=8);
                let pi = FinitePermutation::new(random_bijection(rng, n)).expect("bijection");
                Instance::Permuted { u, pi }
            }
            Axiom::FixedStepAnonymity => {
                let u = pick(rng, corpus).clone();
                let k = rng.random_range(1..=4usize);
                let blocks = (0..rng.random_range(0..=3))
                    .map(|_| random_bijection(rng, k))
                    .collect();
                let tail = random_bijection(rng, k);
                let pi = FixedStepPermutation::new(k as u64, blocks, tail).expect("bijections");
                Instance::BlockPermuted { u, pi }
            }
            Axiom::UniformPareto => {
                let v = pick(rng, corpus).clone();
                let epsilon = pick_value(rng, &positive_steps());
                let noise = random_ep_over(rng, &[int(0), int(1), int(2)], 4, 6);
                Instance::Pareto { v, epsilon, noise }
            }
            Axiom::OneGenerationAdditivity => Instance::Indicator {
                u: pick(rng, corpus).clone(),
                v: pick(rng, corpus).clone(),
                t: rng.random_range(1..=INDEX_MAX),
                alpha: pick_value(rng, &shift_amounts()),
            },
            Axiom::PeriodicAdditivity => {
                let draw = |rng: &mut _| {
                    let s = pick(rng, corpus);
                    match config.periodic_reading {
                        PeriodicReading::Pure => {
                            EpStream::periodic(s.cycle().to_vec()).expect("non-empty")
                        }
                        PeriodicReading::Eventual => s.clone(),
                    }
                };
                let (u, v, w) = (draw(rng), draw(rng), draw(rng));
                Instance::Additive { u, v, w }
            }
            Axiom::FullAdditivity => Instance::Additive {
                u: pick(rng, corpus).clone(),
                v: pick(rng, corpus).clone(),
                w: pick(rng, corpus).clone(),
            },
            Axiom::IncrementalEquity => {
                let u = pick(rng, corpus).clone();
                let (i, j) = distinct_pair(rng, INDEX_MAX);
                let epsilon = pick_value(rng, &positive_steps());
                Instance::Equity { u, i, j, epsilon }
            }
            Axiom::WeakNonSubstitution => Instance::NonSubstitution {
                v: pick(rng, corpus).clone(),
                gap: pick_value(rng, &[int(1), frac(1, 2), int(2), int(3)]),
                epsilon: pick_value(rng, &positive_steps()),
            },
            Axiom::ContinuityBounded => {
                let unit = [int(-1), frac(-1, 2), int(0), frac(1, 2), int(1)];
                Instance::Approximation {
                    u: pick(rng, corpus).clone(),
                    v: pick(rng, corpus).clone(),
                    w: random_ep_over(rng, &unit, 4, 6),
                    upper: rng.random(),
                }
            }
            Axiom::MeanConsistencyBounded | Axiom::ReplicationConsistencyBounded => {
                Instance::Consistency {
                    u: pick(rng, corpus).clone(),
                    v: pick(rng, corpus).clone(),
                    start: rng.random_range(1..=START_MAX),
                }
            }
            Axiom::FixedStepReplicationConsistency => Instance::StepConsistency {
                u: pick(rng, corpus).clone(),
                v: pick(rng, corpus).clone(),
                k: rng.random_range(1..=STEP_MAX),
            },
            Axiom::Lemma1Transfer => {
                let u = pick(rng, corpus).clone();
                let (i, j) = distinct_pair(rng, INDEX_MAX);
                let beta = pick_value(rng, &nonzero_amounts());
                Instance::Transfer { u, i, j, beta }
            }
            Axiom::Lemma2PeriodicTransfer => {
                let u = pick(rng, corpus).clone();
                let period = rng.random_range(2..=8);
                let (s, t) = distinct_pair(rng, period);
                let beta = pick_value(rng, &nonzero_amounts());
                Instance::PeriodicTransfer {
                    u,
                    period,
                    s,
                    t,
                    beta,
                }
            }
        }
    }

    /// Whether this instance has the shape `axiom` expects.
    pub fn fits(&self, axiom: Axiom) -> bool {
        matches!(
            (axiom, self),
            (Axiom::FiniteAnonymity, Instance::Permuted { .. })
                | (Axiom::FixedStepAnonymity, Instance::BlockPermuted { .. })
                | (Axiom::UniformPareto, Instance::Pareto { .. })
                | (Axiom::OneGenerationAdditivity, Instance::Indicator { .. })
                | (
                    Axiom::PeriodicAdditivity | Axiom::FullAdditivity,
                    Instance::Additive { .. }
                )
                | (Axiom::IncrementalEquity, Instance::Equity { .. })
                | (Axiom::WeakNonSubstitution, Instance::NonSubstitution { .. })
                | (Axiom::ContinuityBounded, Instance::Approximation { .. })
                | (
                    Axiom::MeanConsistencyBounded | Axiom::ReplicationConsistencyBounded,
                    Instance::Consistency { .. }
                )
                | (
                    Axiom::FixedStepReplicationConsistency,
                    Instance::StepConsistency { .. }
                )
                | (Axiom::Lemma1Transfer, Instance::Transfer { .. })
                | (
                    Axiom::Lemma2PeriodicTransfer,
                    Instance::PeriodicTransfer { .. }
                )
        )
    }

    /// Checks the instance against `rule`.
    pub fn evaluate(&self, axiom: Axiom, rule: &Rule, config: &HarnessConfig) -> Result<Outcome> {
        if !self.fits(axiom) {
            return Err(Error::Parameter(format!(
                "instance does not match axiom {}",
                axiom.id()
            )));
        }
        let mut out = Outcome::default();
        let outcome = match self {
            Instance::Permuted { u, pi } => {
                let verdict = rule.verdict(u, &u.apply_finite_permutation(pi));
                out.note("verdict(u, u^pi)", verdict);
                out.require(verdict == Verdict::Equivalent)
            }
            Instance::BlockPermuted { u, pi } => {
                let permuted = u.apply_fixed_step_permutation(pi);
                let verdict = rule.verdict(u, &permuted);
                out.note("u^pi", &permuted);
                out.note("verdict(u, u^pi)", verdict);
                out.require(verdict == Verdict::Equivalent)
            }
            Instance::Pareto { v, epsilon, noise } => {
                let u = v.shift(epsilon).add(noise);
                let verdict = rule.verdict(&u, v);
                out.note("u", &u);
                out.note("verdict(u, v)", verdict);
                out.require(verdict == Verdict::StrictlyBetter)
            }
            Instance::Indicator { u, v, t, alpha } => {
                let before = rule.verdict(u, v);
                let after =
                    rule.verdict(&u.add_indicator(*t, alpha)?, &v.add_indicator(*t, alpha)?);
                out.note("verdict(u, v)", before);
                out.note("verdict(u + alpha 1_t, v + alpha 1_t)", after);
                out.require(before == after)
            }
            Instance::Additive { u, v, w } => {
                let before = rule.verdict(u, v);
                let after = rule.verdict(&u.add(w), &v.add(w));
                out.note("verdict(u, v)", before);
                out.note("verdict(u + w, v + w)", after);
                out.require(before == after)
            }
            Instance::Equity { u, i, j, epsilon } => {
                let verdict = rule.verdict(
                    &u.add_indicator(*i, epsilon)?,
                    &u.add_indicator(*j, epsilon)?,
                );
                out.note("verdict(u + eps 1_i, u + eps 1_j)", verdict);
                out.require(verdict == Verdict::Equivalent)
            }
            Instance::NonSubstitution { v, gap, epsilon } => {
                let u = v.shift(epsilon).add_indicator(1, &-(epsilon + gap))?;
                let verdict = rule.verdict(&u, v);
                out.note("u", &u);
                out.note("verdict(u, v)", verdict);
                out.require(verdict.at_least())
            }
            Instance::Approximation { u, v, w, upper } => {
                let sequence_holds = (1..=config.continuity_terms).all(|k| {
                    let uk = u.add(&w.scale(&frac(1, k as i64)));
                    if *upper {
                        rule.verdict(&uk, v).at_least()
                    } else {
                        rule.verdict(v, &uk).at_least()
                    }
                });
                let limit = if *upper {
                    rule.verdict(u, v)
                } else {
                    rule.verdict(v, u)
                };
                out.note("terms", config.continuity_terms);
                out.note(
                    if *upper {
                        "verdict(u, v)"
                    } else {
                        "verdict(v, u)"
                    },
                    limit,
                );
                out.conditional(sequence_holds, limit.at_least())
            }
            Instance::Consistency { u, v, start } => {
                let replicate = axiom == Axiom::ReplicationConsistencyBounded;
                let complete = |s: &EpStream, horizon: u64| {
                    if replicate {
                        s.replicate_prefix(horizon)
                    } else {
                        s.mean_complete(horizon)
                    }
                };
                let premise = if rule.is_mean_determined() {
                    let profile = DifferenceProfile::new(u, v);
                    for horizon in *start..*start + 4 {
                        check_mean_determined(
                            rule,
                            &profile,
                            horizon,
                            &complete(u, horizon)?,
                            &complete(v, horizon)?,
                        )?;
                    }
                    out.note("horizons", format!("all T >= {start}"));
                    profile.holds_from(*start, Direction::AtLeast)
                } else {
                    out.note("horizons", format!("{start}..={}", start + config.window));
                    let mut holds = true;
                    for horizon in *start..=*start + config.window {
                        if !rule
                            .verdict(&complete(u, horizon)?, &complete(v, horizon)?)
                            .at_least()
                        {
                            holds = false;
                            break;
                        }
                    }
                    holds
                };
                let verdict = rule.verdict(u, v);
                out.note("verdict(u, v)", verdict);
                out.conditional(premise, verdict.at_least())
            }
            Instance::StepConsistency { u, v, k } => {
                let premise = if rule.is_mean_determined() {
                    let profile = DifferenceProfile::new(u, v);
                    for m in 1..=4 {
                        let horizon = k * m;
                        check_mean_determined(
                            rule,
                            &profile,
                            horizon,
                            &u.replicate_prefix(horizon)?,
                            &v.replicate_prefix(horizon)?,
                        )?;
                    }
                    out.note("multiples", "all T >= 1");
                    profile.holds_at_multiples(*k, Direction::AtLeast)
                } else {
                    out.note("multiples", format!("1..={}", config.window));
                    let mut holds = true;
                    for m in 1..=config.window {
                        let (a, b) = (u.replicate_prefix(k * m)?, v.replicate_prefix(k * m)?);
                        if !rule.verdict(&a, &b).at_least() {
                            holds = false;
                            break;
                        }
                    }
                    holds
                };
                let verdict = rule.verdict(u, v);
                out.note("verdict(u, v)", verdict);
                out.conditional(premise, verdict.at_least())
            }
            Instance::Transfer { u, i, j, beta } => {
                let verdict = rule.verdict(u, &u.transfer(*i, *j, beta)?);
                out.note("verdict(u, transfer(u))", verdict);
                out.require(verdict == Verdict::Equivalent)
            }
            Instance::PeriodicTransfer {
                u,
                period,
                s,
                t,
                beta,
            } => {
                let left = u.replicate_prefix(*period)?;
                let right = u.transfer(*s, *t, beta)?.replicate_prefix(*period)?;
                let verdict = rule.verdict(&left, &right);
                out.note("verdict([u]_rep, [transfer(u)]_rep)", verdict);
                out.require(verdict == Verdict::Equivalent)
            }
        };
        Ok(outcome)
    }

    /// Structural size and a numeric complexity; shrinking lowers this
    /// pair lexicographically.
    pub fn measure(&self) -> (u64, u64) {
        let mut size = 0;
        let mut weight = 0;
        let mut stream = |s: &EpStream| {
            size += s.head_len() + s.period();
            weight += s
                .head()
                .iter()
                .chain(s.cycle().iter())
                .map(complexity)
                .sum::<u64>();
        };
        let params = match self {
            Instance::Permuted { u, pi } => {
                stream(u);
                pi.horizon() + pi.support() as u64
            }
            Instance::BlockPermuted { u, pi } => {
                stream(u);
                let moved = pi
                    .blocks()
                    .iter()
                    .chain(std::iter::once(&pi.tail().to_vec()))
                    .flat_map(|b| b.iter().enumerate().filter(|(i, &x)| x != i + 1))
                    .count();
                pi.step() + pi.explicit_blocks() as u64 + moved as u64
            }
            Instance::Pareto { v, epsilon, noise } => {
                stream(v);
                stream(noise);
                complexity(epsilon)
            }
            Instance::Indicator { u, v, t, alpha } => {
                stream(u);
                stream(v);
                t + complexity(alpha)
            }
            Instance::Additive { u, v, w } => {
                stream(u);
                stream(v);
                stream(w);
                0
            }
            Instance::Equity { u, i, j, epsilon } => {
                stream(u);
                i + j + complexity(epsilon)
            }
            Instance::NonSubstitution { v, gap, epsilon } => {
                stream(v);
                complexity(gap) + complexity(epsilon)
            }
            Instance::Approximation { u, v, w, .. } => {
                stream(u);
                stream(v);
                stream(w);
                0
            }
            Instance::Consistency { u, v, start } => {
                stream(u);
                stream(v);
                *start
            }
            Instance::StepConsistency { u, v, k } => {
                stream(u);
                stream(v);
                *k
            }
            Instance::Transfer { u, i, j, beta } => {
                stream(u);
                i + j + complexity(beta)
            }
            Instance::PeriodicTransfer {
                u,
                period,
                s,
                t,
                beta,
            } => {
                stream(u);
                period + s + t + complexity(beta)
            }
        };
        (size, weight + params)
    }

    /// Simpler neighbours, in a fixed order.
    pub fn shrink_candidates(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        match self {
            Instance::Permuted { u, pi } => {
                for pi in shrink_finite_permutation(pi) {
                    out.push(Instance::Permuted { u: u.clone(), pi });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::Permuted { u, pi: pi.clone() });
                }
            }
            Instance::BlockPermuted { u, pi } => {
                for pi in shrink_block_permutation(pi) {
                    out.push(Instance::BlockPermuted { u: u.clone(), pi });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::BlockPermuted { u, pi: pi.clone() });
                }
            }
            Instance::Pareto { v, epsilon, noise } => {
                for epsilon in shrink_positive(epsilon) {
                    out.push(Instance::Pareto {
                        v: v.clone(),
                        epsilon,
                        noise: noise.clone(),
                    });
                }
                for noise in shrink_stream(noise) {
                    out.push(Instance::Pareto {
                        v: v.clone(),
                        epsilon: epsilon.clone(),
                        noise,
                    });
                }
                for v in shrink_stream(v) {
                    out.push(Instance::Pareto {
                        v,
                        epsilon: epsilon.clone(),
                        noise: noise.clone(),
                    });
                }
            }
            Instance::Indicator { u, v, t, alpha } => {
                for t in 1..*t {
                    out.push(Instance::Indicator {
                        u: u.clone(),
                        v: v.clone(),
                        t,
                        alpha: alpha.clone(),
                    });
                }
                for alpha in shrink_amount(alpha, true) {
                    out.push(Instance::Indicator {
                        u: u.clone(),
                        v: v.clone(),
                        t: *t,
                        alpha,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::Indicator {
                        u,
                        v: v.clone(),
                        t: *t,
                        alpha: alpha.clone(),
                    });
                }
                for v in shrink_stream(v) {
                    out.push(Instance::Indicator {
                        u: u.clone(),
                        v,
                        t: *t,
                        alpha: alpha.clone(),
                    });
                }
            }
            Instance::Additive { u, v, w } => {
                for w in shrink_stream(w) {
                    out.push(Instance::Additive {
                        u: u.clone(),
                        v: v.clone(),
                        w,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::Additive {
                        u,
                        v: v.clone(),
                        w: w.clone(),
                    });
                }
                for v in shrink_stream(v) {
                    out.push(Instance::Additive {
                        u: u.clone(),
                        v,
                        w: w.clone(),
                    });
                }
            }
            Instance::Equity { u, i, j, epsilon } => {
                for (i, j) in shrink_pair(*i, *j, u64::MAX) {
                    out.push(Instance::Equity {
                        u: u.clone(),
                        i,
                        j,
                        epsilon: epsilon.clone(),
                    });
                }
                for epsilon in shrink_positive(epsilon) {
                    out.push(Instance::Equity {
                        u: u.clone(),
                        i: *i,
                        j: *j,
                        epsilon,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::Equity {
                        u,
                        i: *i,
                        j: *j,
                        epsilon: epsilon.clone(),
                    });
                }
            }
            Instance::NonSubstitution { v, gap, epsilon } => {
                for gap in shrink_positive(gap) {
                    out.push(Instance::NonSubstitution {
                        v: v.clone(),
                        gap,
                        epsilon: epsilon.clone(),
                    });
                }
                for epsilon in shrink_positive(epsilon) {
                    out.push(Instance::NonSubstitution {
                        v: v.clone(),
                        gap: gap.clone(),
                        epsilon,
                    });
                }
                for v in shrink_stream(v) {
                    out.push(Instance::NonSubstitution {
                        v,
                        gap: gap.clone(),
                        epsilon: epsilon.clone(),
                    });
                }
            }
            Instance::Approximation { u, v, w, upper } => {
                let upper = *upper;
                for w in shrink_stream(w) {
                    out.push(Instance::Approximation {
                        u: u.clone(),
                        v: v.clone(),
                        w,
                        upper,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::Approximation {
                        u,
                        v: v.clone(),
                        w: w.clone(),
                        upper,
                    });
                }
                for v in shrink_stream(v) {
                    out.push(Instance::Approximation {
                        u: u.clone(),
                        v,
                        w: w.clone(),
                        upper,
                    });
                }
            }
            Instance::Consistency { u, v, start } => {
                for start in 1..*start {
                    out.push(Instance::Consistency {
                        u: u.clone(),
                        v: v.clone(),
                        start,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::Consistency {
                        u,
                        v: v.clone(),
                        start: *start,
                    });
                }
                for v in shrink_stream(v) {
                    out.push(Instance::Consistency {
                        u: u.clone(),
                        v,
                        start: *start,
                    });
                }
            }
            Instance::StepConsistency { u, v, k } => {
                for k in 1..*k {
                    out.push(Instance::StepConsistency {
                        u: u.clone(),
                        v: v.clone(),
                        k,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::StepConsistency {
                        u,
                        v: v.clone(),
                        k: *k,
                    });
                }
                for v in shrink_stream(v) {
                    out.push(Instance::StepConsistency {
                        u: u.clone(),
                        v,
                        k: *k,
                    });
                }
            }
            Instance::Transfer { u, i, j, beta } => {
                for (i, j) in shrink_pair(*i, *j, u64::MAX) {
                    out.push(Instance::Transfer {
                        u: u.clone(),
                        i,
                        j,
                        beta: beta.clone(),
                    });
                }
                for beta in shrink_amount(beta, false) {
                    out.push(Instance::Transfer {
                        u: u.clone(),
                        i: *i,
                        j: *j,
                        beta,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::Transfer {
                        u,
                        i: *i,
                        j: *j,
                        beta: beta.clone(),
                    });
                }
            }
            Instance::PeriodicTransfer {
                u,
                period,
                s,
                t,
                beta,
            } => {
                for period in 2..*period {
                    if *s <= period && *t <= period {
                        out.push(Instance::PeriodicTransfer {
                            u: u.clone(),
                            period,
                            s: *s,
                            t: *t,
                            beta: beta.clone(),
                        });
                    }
                }
                for (s, t) in shrink_pair(*s, *t, *period) {
                    out.push(Instance::PeriodicTransfer {
                        u: u.clone(),
                        period: *period,
                        s,
                        t,
                        beta: beta.clone(),
                    });
                }
                for beta in shrink_amount(beta, false) {
                    out.push(Instance::PeriodicTransfer {
                        u: u.clone(),
                        period: *period,
                        s: *s,
                        t: *t,
                        beta,
                    });
                }
                for u in shrink_stream(u) {
                    out.push(Instance::PeriodicTransfer {
                        u,
                        period: *period,
                        s: *s,
                        t: *t,
                        beta: beta.clone(),
                    });
                }
            }
        }
        out
    }
}

/// Confirms that a rule flagged mean-determined ranks the two streams by
/// `D_T`, which is what the exact consistency premises rely on.
fn check_mean_determined(
    rule: &Rule,
    profile: &DifferenceProfile,
    horizon: u64,
    a: &EpStream,
    b: &EpStream,
) -> Result<()> {
    let expected =
        Verdict::from_ordering(profile.partial_difference(horizon).cmp(&Rational::zero()));
    let got = rule.verdict(a, b);
    if got != expected {
        return Err(Error::RuleDomain {
            rule: rule.id().to_string(),
            reason: format!(
                "flagged mean-determined but returned {got} where the means give {expected}"
            ),
        });
    }
    Ok(())
}

/// `|p| + q - 1` for `p/q`; zero for zero, one for `±1`.
pub fn complexity(x: &Rational) -> u64 {
    let n = x.numer().abs().to_u64().unwrap_or(u64::MAX / 4);
    let d = x.denom().to_u64().unwrap_or(u64::MAX / 4);
    n + d - 1
}

/// Streams with one entry removed or moved toward zero.
pub fn shrink_stream(s: &EpStream) -> Vec<EpStream> {
    let (head, cycle) = (s.head(), s.cycle());
    let mut out = Vec::new();
    for i in 0..head.len() {
        let mut h = head.to_vec();
        h.remove(i);
        out.push(EpStream::new(h, cycle.to_vec()));
    }
    if cycle.len() > 1 {
        for i in 0..cycle.len() {
            let mut c = cycle.to_vec();
            c.remove(i);
            out.push(EpStream::new(head.to_vec(), c));
        }
    }
    for i in 0..head.len() {
        for x in toward_zero(&head[i]) {
            let mut h = head.to_vec();
            h[i] = x;
            out.push(EpStream::new(h, cycle.to_vec()));
        }
    }
    for i in 0..cycle.len() {
        for x in toward_zero(&cycle[i]) {
            let mut c = cycle.to_vec();
            c[i] = x;
            out.push(EpStream::new(head.to_vec(), c));
        }
    }
    // sum-preserving moves keep drift-sensitive properties alive
    for (i, j) in index_pairs(head.len()) {
        for h in pair_moves(head, i, j) {
            out.push(EpStream::new(h, cycle.to_vec()));
        }
    }
    for (i, j) in index_pairs(cycle.len()) {
        for c in pair_moves(cycle, i, j) {
            if !c.is_empty() {
                out.push(EpStream::new(head.to_vec(), c));
            }
        }
    }
    out.into_iter()
        .filter_map(|r| r.ok())
        .filter(|r| r != s)
        .collect()
}

fn index_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Drops entries `i < j` together, and when they have opposite signs moves
/// both toward zero by the same amount.
fn pair_moves(xs: &[Rational], i: usize, j: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    let mut dropped = xs.to_vec();
    dropped.remove(j);
    dropped.remove(i);
    out.push(dropped);
    if (xs[i].is_positive() && xs[j].is_negative()) || (xs[i].is_negative() && xs[j].is_positive())
    {
        let step = xs[i].abs().min(xs[j].abs()).min(Rational::one());
        let mut moved = xs.to_vec();
        moved[i] -= xs[i].signum() * &step;
        moved[j] -= xs[j].signum() * &step;
        out.push(moved);
    }
    out
}

fn toward_zero(x: &Rational) -> Vec<Rational> {
    if x.is_zero() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero()];
    if x.abs() > Rational::one() {
        out.push(x - x.signum());
    }
    if !x.is_integer() && x.abs() > Rational::one() {
        out.push(x.trunc());
    }
    out
}

fn shrink_positive(x: &Rational) -> Vec<Rational> {
    [int(1), frac(1, 2)]
        .into_iter()
        .filter(|c| complexity(c) < complexity(x))
        .collect()
}

fn shrink_amount(x: &Rational, allow_zero: bool) -> Vec<Rational> {
    [
        int(0),
        int(1),
        int(-1),
        frac(1, 2),
        frac(-1, 2),
        int(2),
        int(-2),
    ]
    .into_iter()
    .filter(|c| (allow_zero || !c.is_zero()) && complexity(c) < complexity(x))
    .collect()
}

fn shrink_pair(i: u64, j: u64, max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for a in 1..=i.max(j).min(max) {
        for b in 1..=i.max(j).min(max) {
            if a != b && a + b < i + j {
                out.push((a, b));
            }
        }
    }
    out.sort_by_key(|&(a, b)| (a + b, a));
    out
}

fn shrink_finite_permutation(pi: &FinitePermutation) -> Vec<FinitePermutation> {
    let n = pi.mapping().len();
    let mut out = Vec::new();
    for b in 2..=n {
        for a in 1..b {
            out.push(FinitePermutation::transposition(a, b).expect("indices >= 1"));
        }
    }
    if n > 1 && pi.mapping()[n - 1] == n {
        out.push(
            FinitePermutation::new(pi.mapping()[..n - 1].to_vec()).expect("still a bijection"),
        );
    }
    out.into_iter()
        .filter(|c| (c.horizon(), c.support()) < (pi.horizon(), pi.support()))
        .collect()
}

fn shrink_block_permutation(pi: &FixedStepPermutation) -> Vec<FixedStepPermutation> {
    let k = pi.step();
    let identity: Vec<usize> = (1..=k as usize).collect();
    let mut out = Vec::new();
    if pi.explicit_blocks() > 0 {
        let mut blocks = pi.blocks().to_vec();
        blocks.pop();
        out.push(FixedStepPermutation::new(k, blocks, pi.tail().to_vec()));
    }
    for i in 0..pi.explicit_blocks() {
        if pi.blocks()[i] != identity {
            let mut blocks = pi.blocks().to_vec();
            blocks[i] = identity.clone();
            out.push(FixedStepPermutation::new(k, blocks, pi.tail().to_vec()));
        }
    }
    if pi.tail() != identity.as_slice() {
        out.push(FixedStepPermutation::new(
            k,
            pi.blocks().to_vec(),
            identity.clone(),
        ));
    }
    for step in 1..k {
        out.push(Ok(FixedStepPermutation::identity(step)));
        if step >= 2 {
            let mut swap: Vec<usize> = (1..=step as usize).collect();
            swap.swap(0, 1);
            out.push(FixedStepPermutation::new(step, Vec::new(), swap));
        }
    }
    out.into_iter().filter_map(|r| r.ok()).collect()
}

impl std::fmt::Display for Evidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {}", self.label, self.value)
    }
}
