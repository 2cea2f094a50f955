//! Executable axioms, a rule registry, and seeded falsification.
//!
//! Each trial draws its streams from a corpus and its parameters from a
//! per-trial random stream, checks one axiom instance against a rule, and
//! records whether the instance refutes the axiom. The first failing trial
//! is shrunk into a witness that can be replayed on its own.
//!
//! Axioms whose premise quantifies over infinitely many horizons are
//! checked on a finite window, which can refute but never certify. For rules
//! that rank streams by their Cesàro average the premise reduces to a sign
//! condition on partial sums and is decided exactly instead.

pub mod gen;
pub mod instance;
pub mod rules;
pub mod search;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream::EpStream;

pub use gen::{random_corpus, GeneratorConfig};
pub use instance::{Evidence, Instance, Outcome};
pub use rules::{builtin_rule, IndependenceClaim, Rule, INDEPENDENCE_CLAIMS, RULE_IDS};
pub use search::{search_counterexample, SearchOutcome, SearchWitness};

/// Upper bound on accepted shrinking steps.
const SHRINK_STEP_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    FiniteAnonymity,
    FixedStepAnonymity,
    UniformPareto,
    OneGenerationAdditivity,
    PeriodicAdditivity,
    FullAdditivity,
    IncrementalEquity,
    WeakNonSubstitution,
    ContinuityBounded,
    MeanConsistencyBounded,
    ReplicationConsistencyBounded,
    FixedStepReplicationConsistency,
    #[serde(rename = "lemma1_transfer")]
    Lemma1Transfer,
    #[serde(rename = "lemma2_periodic_transfer")]
    Lemma2PeriodicTransfer,
}

impl Axiom {
    pub const ALL: [Axiom; 14] = [
        Axiom::FiniteAnonymity,
        Axiom::FixedStepAnonymity,
        Axiom::UniformPareto,
        Axiom::OneGenerationAdditivity,
        Axiom::PeriodicAdditivity,
        Axiom::FullAdditivity,
        Axiom::IncrementalEquity,
        Axiom::WeakNonSubstitution,
        Axiom::ContinuityBounded,
        Axiom::MeanConsistencyBounded,
        Axiom::ReplicationConsistencyBounded,
        Axiom::FixedStepReplicationConsistency,
        Axiom::Lemma1Transfer,
        Axiom::Lemma2PeriodicTransfer,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Axiom::FiniteAnonymity => "finite_anonymity",
            Axiom::FixedStepAnonymity => "fixed_step_anonymity",
            Axiom::UniformPareto => "uniform_pareto",
            Axiom::OneGenerationAdditivity => "one_generation_additivity",
            Axiom::PeriodicAdditivity => "periodic_additivity",
            Axiom::FullAdditivity => "full_additivity",
            Axiom::IncrementalEquity => "incremental_equity",
            Axiom::WeakNonSubstitution => "weak_non_substitution",
            Axiom::ContinuityBounded => "continuity_bounded",
            Axiom::MeanConsistencyBounded => "mean_consistency_bounded",
            Axiom::ReplicationConsistencyBounded => "replication_consistency_bounded",
            Axiom::FixedStepReplicationConsistency => "fixed_step_replication_consistency",
            Axiom::Lemma1Transfer => "lemma1_transfer",
            Axiom::Lemma2PeriodicTransfer => "lemma2_periodic_transfer",
        }
    }

    /// Premise ranges over infinitely many horizons or approximants.
    pub fn has_unbounded_premise(self) -> bool {
        matches!(
            self,
            Axiom::ContinuityBounded
                | Axiom::MeanConsistencyBounded
                | Axiom::ReplicationConsistencyBounded
                | Axiom::FixedStepReplicationConsistency
        )
    }

    pub fn mode_for(self, rule: &Rule) -> Mode {
        let exact = match self {
            Axiom::ContinuityBounded => false,
            Axiom::MeanConsistencyBounded
            | Axiom::ReplicationConsistencyBounded
            | Axiom::FixedStepReplicationConsistency => rule.is_mean_determined(),
            _ => true,
        };
        if exact {
            Mode::Exact
        } else {
            Mode::BoundedHorizon
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "bounded-horizon")]
    BoundedHorizon,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::BoundedHorizon => "bounded-horizon",
        })
    }
}

/// Which streams count as periodic for periodic additivity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicReading {
    /// Empty head.
    #[default]
    Pure,
    /// Any eventually-periodic stream.
    Eventual,
}

impl FromStr for PeriodicReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(PeriodicReading::Pure),
            "eventual" => Ok(PeriodicReading::Eventual),
            other => Err(Error::Parameter(format!(
                "unknown periodic reading `{other}` (expected pure or eventual)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessConfig {
    /// Number of horizons past `T*` (or multiples of `k`) checked by the
    /// bounded consistency axioms.
    pub window: u64,
    /// Number of approximants `u + w / k` checked by continuity.
    pub continuity_terms: u64,
    pub periodic_reading: PeriodicReading,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            window: 64,
            continuity_terms: 64,
            periodic_reading: PeriodicReading::Pure,
        }
    }
}

/// A shrunk failing instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomWitness {
    pub trial: u64,
    pub instance: Instance,
    pub evidence: Vec<Evidence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom_id: Axiom,
    pub rule_id: String,
    pub mode: Mode,
    /// Horizons or approximants inspected by a bounded premise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    pub trials: u64,
    pub failures: u64,
    /// Trials whose premise did not hold.
    pub vacuous: u64,
    pub seed: u64,
    pub witness: Option<AxiomWitness>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs `trials` seeded instances of `axiom` against `rule`.
pub fn test_axiom(
    rule: &Rule,
    axiom: Axiom,
    corpus: &[EpStream],
    trials: u64,
    seed: u64,
    config: &HarnessConfig,
) -> Result<AxiomReport> {
    if corpus.is_empty() {
        return Err(Error::Parameter("axiom corpus is empty".into()));
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let instance = trial_instance(axiom, corpus, seed, i, config);
            instance
                .evaluate(axiom, rule, config)
                .map(|o| (o.failed, o.vacuous))
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = outcomes.iter().filter(|o| o.0).count() as u64;
    let vacuous = outcomes.iter().filter(|o| o.1).count() as u64;
    let witness = match outcomes.iter().position(|o| o.0) {
        Some(i) => {
            let instance = trial_instance(axiom, corpus, seed, i as u64, config);
            Some(build_witness(rule, axiom, instance, i as u64, config)?)
        }
        None => None,
    };
    let mode = axiom.mode_for(rule);
    let window = match (mode, axiom) {
        (Mode::BoundedHorizon, Axiom::ContinuityBounded) => Some(config.continuity_terms),
        (Mode::BoundedHorizon, _) => Some(config.window),
        _ => None,
    };
    Ok(AxiomReport {
        axiom_id: axiom,
        rule_id: rule.id().to_string(),
        mode,
        window,
        trials,
        failures,
        vacuous,
        seed,
        witness,
    })
}

fn trial_instance(
    axiom: Axiom,
    corpus: &[EpStream],
    seed: u64,
    index: u64,
    config: &HarnessConfig,
) -> Instance {
    let mut rng = gen::trial_rng(seed, index);
    Instance::generate(axiom, corpus, &mut rng, config)
}

pub(crate) fn build_witness(
    rule: &Rule,
    axiom: Axiom,
    instance: Instance,
    trial: u64,
    config: &HarnessConfig,
) -> Result<AxiomWitness> {
    let instance = shrink(instance, |c| Ok(c.evaluate(axiom, rule, config)?.failed))?;
    let evidence = instance.evaluate(axiom, rule, config)?.evidence;
    Ok(AxiomWitness {
        trial,
        instance,
        evidence,
    })
}

/// Greedy shrinking: repeatedly take the first candidate that keeps the
/// property and has a smaller measure.
pub(crate) fn shrink(
    mut current: Instance,
    keeps: impl Fn(&Instance) -> Result<bool>,
) -> Result<Instance> {
    for _ in 0..SHRINK_STEP_LIMIT {
        let measure = current.measure();
        let mut next = None;
        for candidate in current.shrink_candidates() {
            if candidate.measure() < measure && keeps(&candidate)? {
                next = Some(candidate);
                break;
            }
        }
        match next {
            Some(c) => current = c,
            None => break,
        }
    }
    Ok(current)
}

/// Re-checks a witness outside the harness; true if it still refutes.
pub fn replay_witness(
    rule: &Rule,
    axiom: Axiom,
    witness: &AxiomWitness,
    config: &HarnessConfig,
) -> Result<bool> {
    Ok(witness.instance.evaluate(axiom, rule, config)?.failed)
}

/// Every axiom against one rule.
pub fn theorem1_suite(
    rule: &Rule,
    corpus: &[EpStream],
    trials: u64,
    seed: u64,
    config: &HarnessConfig,
) -> Result<Vec<AxiomReport>> {
    Axiom::ALL
        .iter()
        .map(|&a| test_axiom(rule, a, corpus, trials, seed, config))
        .collect()
}

/// Outcome of one independence example: reports for the dropped axioms and
/// for the kept ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub rule_id: String,
    pub dropped: Vec<AxiomReport>,
    pub kept: Vec<AxiomReport>,
}

impl IndependenceReport {
    /// Every dropped axiom has a witness and every kept axiom passes.
    pub fn confirmed(&self) -> bool {
        self.dropped.iter().all(|r| r.witness.is_some())
            && self.kept.iter().all(AxiomReport::passed)
    }
}

pub fn independence_suite(
    corpus: &[EpStream],
    trials: u64,
    seed: u64,
    config: &HarnessConfig,
) -> Result<Vec<IndependenceReport>> {
    INDEPENDENCE_CLAIMS
        .iter()
        .map(|claim| {
            let rule = builtin_rule(claim.rule_id)?;
            let run = |axioms: &[Axiom]| -> Result<Vec<AxiomReport>> {
                axioms
                    .iter()
                    .map(|&a| test_axiom(&rule, a, corpus, trials, seed, config))
                    .collect()
            };
            Ok(IndependenceReport {
                rule_id: claim.rule_id.to_string(),
                dropped: run(claim.drops)?,
                kept: run(claim.keeps)?,
            })
        })
        .collect()
}
