use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_bijection(mapping: &[usize]) -> Result<()> {
    let n = mapping.len();
    let mut seen = vec![false; n];
    for &m in mapping {
        if m == 0 || m > n || std::mem::replace(&mut seen[m - 1], true) {
            return Err(Error::Permutation(format!(
                "{mapping:?} is not a bijection of 1..={n}"
            )));
        }
    }
    Ok(())
}

/// A permutation of `{1..T}`, extended by the identity beyond `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FinitePermutation {
    // mapping[t - 1] = pi(t)
    mapping: Vec<usize>,
}

impl FinitePermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        if mapping.is_empty() {
            return Err(Error::Permutation("horizon must be >= 1".into()));
        }
        check_bijection(&mapping)?;
        Ok(Self { mapping })
    }

    pub fn identity(horizon: usize) -> Self {
        Self {
            mapping: (1..=horizon.max(1)).collect(),
        }
    }

    /// Swaps generations `a` and `b`.
    pub fn transposition(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::Permutation("generation indices start at 1".into()));
        }
        let mut mapping: Vec<usize> = (1..=a.max(b)).collect();
        mapping.swap(a - 1, b - 1);
        Ok(Self { mapping })
    }

    pub fn horizon(&self) -> u64 {
        self.mapping.len() as u64
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, t: u64) -> u64 {
        match usize::try_from(t) {
            Ok(i) if i >= 1 && i <= self.mapping.len() => self.mapping[i - 1] as u64,
            _ => t,
        }
    }

    /// Number of generations actually moved.
    pub fn support(&self) -> usize {
        self.mapping
            .iter()
            .enumerate()
            .filter(|(i, &m)| m != i + 1)
            .count()
    }
}

impl TryFrom<Vec<usize>> for FinitePermutation {
    type Error = Error;

    fn try_from(mapping: Vec<usize>) -> Result<Self> {
        Self::new(mapping)
    }
}

impl From<FinitePermutation> for Vec<usize> {
    fn from(p: FinitePermutation) -> Self {
        p.mapping
    }
}

/// A fixed-step permutation in blockwise form.
///
/// A permutation `pi` with `pi({1..kT}) = {1..kT}` for every `T` maps each
/// block `{k(T-1)+1..kT}` onto itself: the block is the set difference of two
/// consecutive invariant prefixes. So a list of per-block bijections of
/// `{1..k}` is fully general. Blocks past the explicit list all use `tail`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FixedStepRepr", into = "FixedStepRepr")]
pub struct FixedStepPermutation {
    step: u64,
    blocks: Vec<Vec<usize>>,
    tail: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FixedStepRepr {
    step: u64,
    blocks: Vec<Vec<usize>>,
    tail: Vec<usize>,
}

impl FixedStepPermutation {
    pub fn new(step: u64, blocks: Vec<Vec<usize>>, tail: Vec<usize>) -> Result<Self> {
        if step == 0 {
            return Err(Error::Permutation("step must be >= 1".into()));
        }
        for block in blocks.iter().chain(std::iter::once(&tail)) {
            if block.len() as u64 != step {
                return Err(Error::Permutation(format!(
                    "block {block:?} does not have length {step}"
                )));
            }
            check_bijection(block)?;
        }
        Ok(Self { step, blocks, tail })
    }

    pub fn identity(step: u64) -> Self {
        Self {
            step: step.max(1),
            blocks: Vec::new(),
            tail: (1..=step.max(1) as usize).collect(),
        }
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn explicit_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn tail(&self) -> &[usize] {
        &self.tail
    }

    pub fn apply(&self, t: u64) -> u64 {
        assert!(t >= 1, "generation indices start at 1");
        let block = (t - 1) / self.step;
        let offset = ((t - 1) % self.step) as usize;
        let sigma = usize::try_from(block)
            .ok()
            .and_then(|b| self.blocks.get(b))
            .unwrap_or(&self.tail);
        block * self.step + sigma[offset] as u64
    }
}

impl TryFrom<FixedStepRepr> for FixedStepPermutation {
    type Error = Error;

    fn try_from(r: FixedStepRepr) -> Result<Self> {
        Self::new(r.step, r.blocks, r.tail)
    }
}

impl From<FixedStepPermutation> for FixedStepRepr {
    fn from(p: FixedStepPermutation) -> Self {
        Self {
            step: p.step,
            blocks: p.blocks,
            tail: p.tail,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(FinitePermutation::new(vec![1, 1]).is_err());
        assert!(FinitePermutation::new(vec![0, 1]).is_err());
        assert!(FinitePermutation::new(vec![3, 1]).is_err());
        assert!(FinitePermutation::new(vec![]).is_err());
        assert!(FixedStepPermutation::new(2, vec![vec![1, 2, 3]], vec![2, 1]).is_err());
        assert!(FixedStepPermutation::new(0, vec![], vec![]).is_err());
        assert!(FixedStepPermutation::new(2, vec![], vec![2, 2]).is_err());
    }

    #[test]
    fn finite_permutation_is_identity_beyond_horizon() {
        let p = FinitePermutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(
            (1..=5).map(|t| p.apply(t)).collect::<Vec<_>>(),
            vec![3, 1, 2, 4, 5]
        );
        assert_eq!(p.support(), 3);
    }

    #[test]
    fn fixed_step_maps_blocks_onto_themselves() {
        let p = FixedStepPermutation::new(3, vec![vec![3, 2, 1]], vec![2, 3, 1]).unwrap();
        let image: Vec<u64> = (1..=9).map(|t| p.apply(t)).collect();
        assert_eq!(image, vec![3, 2, 1, 5, 6, 4, 8, 9, 7]);
        for block in 0..20u64 {
            let mut seen: Vec<u64> = (1..=3).map(|i| p.apply(3 * block + i)).collect();
            seen.sort();
            assert_eq!(seen, vec![3 * block + 1, 3 * block + 2, 3 * block + 3]);
        }
    }

    #[test]
    fn serde_validates() {
        let bad: std::result::Result<FinitePermutation, _> = serde_json::from_str("[2,2]");
        assert!(bad.is_err());
        let ok: FixedStepPermutation =
            serde_json::from_str(r#"{"step":2,"blocks":[],"tail":[2,1]}"#).unwrap();
        assert_eq!(ok.apply(1), 2);
    }
}
