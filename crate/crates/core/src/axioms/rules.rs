//! Registry of comparison rules: the Cesàro rule, the two catching-up
//! quasi-orderings, and the constructive independence examples.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::orderings::{self, ComparisonResult, Verdict};
use crate::stream::EpStream;

use super::Axiom;

type CompareFn = dyn Fn(&EpStream, &EpStream) -> ComparisonResult + Send + Sync;

/// A binary relation on eventually-periodic streams.
#[derive(Clone)]
pub struct Rule {
    id: String,
    complete: bool,
    mean_determined: bool,
    compare: Arc<CompareFn>,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        complete: bool,
        compare: impl Fn(&EpStream, &EpStream) -> ComparisonResult + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            complete,
            mean_determined: false,
            compare: Arc::new(compare),
        }
    }

    /// Marks a rule whose verdict is `sign(mu_inf(u) - mu_inf(v))`. The
    /// consistency axioms are then decided exactly from partial sums.
    pub fn mean_determined(mut self) -> Self {
        self.mean_determined = true;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_mean_determined(&self) -> bool {
        self.mean_determined
    }

    pub fn compare(&self, u: &EpStream, v: &EpStream) -> ComparisonResult {
        let result = (self.compare)(u, v);
        debug_assert!(
            !(self.complete && result.verdict == Verdict::Incomparable),
            "complete rule {} returned Incomparable",
            self.id
        );
        result
    }

    pub fn verdict(&self, u: &EpStream, v: &EpStream) -> Verdict {
        self.compare(u, v).verdict
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule")
            .field("id", &self.id)
            .field("complete", &self.complete)
            .field("mean_determined", &self.mean_determined)
            .finish_non_exhaustive()
    }
}

pub const RULE_IDS: [&str; 8] = [
    "cesaro",
    "catching_up",
    "fixed_step",
    "trivial_indifference",
    "dictator_t1",
    "inf_rule",
    "liminf_value",
    "liminf_mean",
];

fn by_value<K: Ord>(
    key: impl Fn(&EpStream) -> K,
) -> impl Fn(&EpStream, &EpStream) -> ComparisonResult {
    move |u, v| ComparisonResult::new(Verdict::from_ordering(key(u).cmp(&key(v))))
}

pub fn builtin_rule(id: &str) -> Result<Rule> {
    let rule = match id {
        "cesaro" => Rule::new(id, true, orderings::compare_cesaro).mean_determined(),
        "catching_up" => Rule::new(id, false, orderings::compare_catching_up),
        "fixed_step" => Rule::new(id, false, orderings::compare_fixed_step),
        "trivial_indifference" => Rule::new(id, true, |_: &EpStream, _: &EpStream| {
            ComparisonResult::new(Verdict::Equivalent)
        }),
        "dictator_t1" => Rule::new(id, true, by_value(|s| s.value_at(1).clone())),
        "inf_rule" => Rule::new(id, true, by_value(|s| s.infimum().clone())),
        "liminf_value" => Rule::new(id, true, by_value(|s| s.cycle_min().clone())),
        // liminf of the running mean equals the cycle mean on this domain
        "liminf_mean" => Rule::new(id, true, by_value(EpStream::cycle_mean)).mean_determined(),
        other => return Err(Error::UnknownRule(other.to_string())),
    };
    Ok(rule)
}

/// An independence example: the axiom it drops and the ones it keeps.
#[derive(Clone, Copy, Debug)]
pub struct IndependenceClaim {
    pub rule_id: &'static str,
    pub drops: &'static [Axiom],
    pub keeps: &'static [Axiom],
}

pub const INDEPENDENCE_CLAIMS: [IndependenceClaim; 5] = [
    IndependenceClaim {
        rule_id: "trivial_indifference",
        drops: &[Axiom::UniformPareto],
        keeps: &[
            Axiom::FiniteAnonymity,
            Axiom::FixedStepAnonymity,
            Axiom::ContinuityBounded,
            Axiom::OneGenerationAdditivity,
            Axiom::PeriodicAdditivity,
            Axiom::MeanConsistencyBounded,
            Axiom::FixedStepReplicationConsistency,
        ],
    },
    IndependenceClaim {
        rule_id: "dictator_t1",
        drops: &[Axiom::FiniteAnonymity, Axiom::FixedStepAnonymity],
        keeps: &[
            Axiom::UniformPareto,
            Axiom::ContinuityBounded,
            Axiom::OneGenerationAdditivity,
            Axiom::PeriodicAdditivity,
            Axiom::MeanConsistencyBounded,
            Axiom::FixedStepReplicationConsistency,
        ],
    },
    IndependenceClaim {
        rule_id: "inf_rule",
        drops: &[Axiom::OneGenerationAdditivity, Axiom::PeriodicAdditivity],
        keeps: &[
            Axiom::UniformPareto,
            Axiom::FiniteAnonymity,
            Axiom::FixedStepAnonymity,
            Axiom::ContinuityBounded,
            Axiom::MeanConsistencyBounded,
            Axiom::FixedStepReplicationConsistency,
        ],
    },
    IndependenceClaim {
        rule_id: "liminf_value",
        drops: &[Axiom::MeanConsistencyBounded],
        keeps: &[
            Axiom::UniformPareto,
            Axiom::FiniteAnonymity,
            Axiom::ContinuityBounded,
            Axiom::OneGenerationAdditivity,
        ],
    },
    IndependenceClaim {
        rule_id: "liminf_mean",
        drops: &[Axiom::FixedStepReplicationConsistency],
        keeps: &[
            Axiom::UniformPareto,
            Axiom::FixedStepAnonymity,
            Axiom::ContinuityBounded,
            Axiom::PeriodicAdditivity,
        ],
    },
];
