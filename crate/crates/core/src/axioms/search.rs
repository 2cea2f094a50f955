//! Randomized counterexample search with deterministic shrinking.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orderings::{self, DifferenceProfile};
use crate::stream::EpStream;

use super::gen::{random_corpus, random_ep, trial_rng, GeneratorConfig};
use super::instance::{complexity, shrink_stream, Evidence};
use super::{
    build_witness, builtin_rule, trial_instance, Axiom, AxiomWitness, HarnessConfig, Instance,
};

/// Trials evaluated per parallel batch; the first hit in index order wins.
const BATCH: u64 = 256;
/// Streams in the corpus that axiom searches draw from.
const AXIOM_CORPUS: usize = 500;

pub const PAIR_PROPERTIES: [&str; 3] = [
    "fixC_strictly_weaker_than_C",
    "C_incomparable_pair",
    "C_implies_fixC_violation",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchWitness {
    Pair {
        trial: u64,
        u: EpStream,
        v: EpStream,
        evidence: Vec<Evidence>,
    },
    Axiom {
        axiom: Axiom,
        rule_id: String,
        #[serde(flatten)]
        witness: AxiomWitness,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub property: String,
    pub seed: u64,
    pub budget: u64,
    pub witness: Option<SearchWitness>,
}

enum Property {
    Pair(fn(&EpStream, &EpStream) -> bool),
    Axiom(Axiom, String),
}

fn parse_property(id: &str) -> Result<Property> {
    match id {
        // the two catching-up relations disagree; since C is contained in
        // fixC, fixC then relates the pair where C does not
        "fixC_strictly_weaker_than_C" => Ok(Property::Pair(|u, v| {
            let profile = DifferenceProfile::new(u, v);
            orderings::catching_up_from_profile(&profile).verdict
                != orderings::fixed_step_from_profile(&profile).verdict
        })),
        "C_incomparable_pair" => Ok(Property::Pair(|u, v| {
            orderings::compare_catching_up(u, v).verdict == orderings::Verdict::Incomparable
        })),
        "C_implies_fixC_violation" => Ok(Property::Pair(|u, v| {
            !orderings::check_c_implies_fixc(u, v)
        })),
        other => {
            let mut parts = other.splitn(3, ':');
            match (parts.next(), parts.next(), parts.next()) {
                (Some("axiom"), Some(axiom), Some(rule)) => {
                    builtin_rule(rule)?;
                    Ok(Property::Axiom(axiom.parse()?, rule.to_string()))
                }
                _ => Err(Error::UnknownProperty(other.to_string())),
            }
        }
    }
}

/// Smallest index in `0..budget` satisfying `hit`.
fn first_hit(budget: u64, hit: impl Fn(u64) -> Result<bool> + Sync) -> Result<Option<u64>> {
    let mut start = 0;
    while start < budget {
        let end = (start + BATCH).min(budget);
        let found = (start..end)
            .into_par_iter()
            .map(|i| hit(i).map(|h| h.then_some(i)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = found.into_iter().flatten().min() {
            return Ok(Some(i));
        }
        start = end;
    }
    Ok(None)
}

fn pair_measure(u: &EpStream, v: &EpStream) -> (u64, u64) {
    let size = u.head_len() + u.period() + v.head_len() + v.period();
    let weight = [u, v]
        .iter()
        .flat_map(|s| s.head().iter().chain(s.cycle().iter()))
        .map(complexity)
        .sum();
    (size, weight)
}

fn shrink_pair(
    mut u: EpStream,
    mut v: EpStream,
    keeps: fn(&EpStream, &EpStream) -> bool,
) -> (EpStream, EpStream) {
    loop {
        let measure = pair_measure(&u, &v);
        let candidates = shrink_stream(&u)
            .into_iter()
            .map(|c| (c, v.clone()))
            .chain(shrink_stream(&v).into_iter().map(|c| (u.clone(), c)));
        let next = candidates
            .into_iter()
            .find(|(a, b)| pair_measure(a, b) < measure && keeps(a, b));
        match next {
            Some((a, b)) => (u, v) = (a, b),
            None => return (u, v),
        }
    }
}

fn pair_evidence(u: &EpStream, v: &EpStream) -> Vec<Evidence> {
    let profile = DifferenceProfile::new(u, v);
    let c = orderings::catching_up_from_profile(&profile);
    let f = orderings::fixed_step_from_profile(&profile);
    let mut out = vec![
        Evidence {
            label: "catching_up".into(),
            value: c.verdict.to_string(),
        },
        Evidence {
            label: "fixed_step".into(),
            value: f.verdict.to_string(),
        },
    ];
    if let Some(orderings::Witness::Step { k }) = f.witness {
        out.push(Evidence {
            label: "fixed_step k".into(),
            value: k.to_string(),
        });
    }
    out.push(Evidence {
        label: "difference profile".into(),
        value: profile.to_string(),
    });
    out
}

/// Looks for a pair (or axiom instance) with the named property among
/// `budget` seeded random draws and shrinks the first one found.
///
/// Properties: `fixC_strictly_weaker_than_C`, `C_incomparable_pair`,
/// `C_implies_fixC_violation`, and `axiom:<axiom_id>:<rule_id>`.
pub fn search_counterexample(
    property: &str,
    generator: &GeneratorConfig,
    seed: u64,
    budget: u64,
) -> Result<SearchOutcome> {
    generator.validate()?;
    let witness = match parse_property(property)? {
        Property::Pair(holds) => {
            let draw = |i: u64| {
                let mut rng = trial_rng(seed, i);
                (
                    random_ep(&mut rng, generator),
                    random_ep(&mut rng, generator),
                )
            };
            first_hit(budget, |i| {
                let (u, v) = draw(i);
                Ok(holds(&u, &v))
            })?
            .map(|i| {
                let (u, v) = draw(i);
                let (u, v) = shrink_pair(u, v, holds);
                SearchWitness::Pair {
                    trial: i,
                    evidence: pair_evidence(&u, &v),
                    u,
                    v,
                }
            })
        }
        Property::Axiom(axiom, rule_id) => {
            let rule = builtin_rule(&rule_id)?;
            let config = HarnessConfig::default();
            let corpus = random_corpus(AXIOM_CORPUS, seed, generator)?;
            let instance = |i| -> Instance { trial_instance(axiom, &corpus, seed, i, &config) };
            match first_hit(budget, |i| {
                Ok(instance(i).evaluate(axiom, &rule, &config)?.failed)
            })? {
                Some(i) => Some(SearchWitness::Axiom {
                    axiom,
                    rule_id,
                    witness: build_witness(&rule, axiom, instance(i), i, &config)?,
                }),
                None => None,
            }
        }
    };
    Ok(SearchOutcome {
        property: property.to_string(),
        seed,
        budget,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_the_separating_pair() {
        let out = search_counterexample(
            "fixC_strictly_weaker_than_C",
            &GeneratorConfig::default(),
            1,
            2000,
        )
        .unwrap();
        let Some(SearchWitness::Pair { u, v, .. }) = out.witness else {
            panic!("no witness");
        };
        let c = orderings::compare_catching_up(&u, &v).verdict;
        let f = orderings::compare_fixed_step(&u, &v).verdict;
        assert_ne!(c, f);
        assert!(pair_measure(&u, &v).0 <= 4, "{u} / {v}");
    }

    #[test]
    fn implication_has_no_counterexample() {
        let out = search_counterexample(
            "C_implies_fixC_violation",
            &GeneratorConfig::default(),
            3,
            2000,
        )
        .unwrap();
        assert!(out.witness.is_none());
    }

    #[test]
    fn rejects_unknown_properties() {
        let g = GeneratorConfig::default();
        assert!(matches!(
            search_counterexample("nope", &g, 0, 1),
            Err(Error::UnknownProperty(_))
        ));
        assert!(matches!(
            search_counterexample("axiom:nope:cesaro", &g, 0, 1),
            Err(Error::UnknownAxiom(_))
        ));
        assert!(matches!(
            search_counterexample("axiom:uniform_pareto:x", &g, 0, 1),
            Err(Error::UnknownRule(_))
        ));
    }
}
