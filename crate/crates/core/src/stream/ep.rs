use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{FinitePermutation, FixedStepPermutation};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// An eventually-periodic stream `(h_1, .., h_n, c_1, .., c_p, c_1, ..)`.
///
/// Always held in canonical form: the cycle is primitive (not a repetition of
/// a shorter word) and the head is minimal (its last element differs from the
/// last cycle element). Canonical forms are equal iff the streams are equal
/// pointwise, so the derived `PartialEq` is stream equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpStream {
    head: Vec<Rational>,
    cycle: Vec<Rational>,
}

impl EpStream {
    /// Builds and canonicalizes a stream. The cycle must be nonempty.
    pub fn new(head: Vec<Rational>, cycle: Vec<Rational>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::MalformedStream("cycle must be nonempty".into()));
        }
        Ok(Self::canonical(head, cycle))
    }

    pub fn periodic(cycle: Vec<Rational>) -> Result<Self> {
        Self::new(Vec::new(), cycle)
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            head: Vec::new(),
            cycle: vec![c],
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// Integer convenience constructor, mostly for tests and examples.
    pub fn from_ints(head: &[i64], cycle: &[i64]) -> Result<Self> {
        Self::new(
            head.iter().map(|&x| rational::int(x)).collect(),
            cycle.iter().map(|&x| rational::int(x)).collect(),
        )
    }

    /// Samples `f` on `1..=head_len + period` and canonicalizes. `f` must be
    /// periodic with period `period` beyond `head_len`.
    pub(crate) fn from_fn(head_len: u64, period: u64, f: impl Fn(u64) -> Rational) -> Self {
        debug_assert!(period >= 1);
        let head = (1..=head_len).map(&f).collect();
        let cycle = (head_len + 1..=head_len + period).map(&f).collect();
        Self::canonical(head, cycle)
    }

    fn canonical(mut head: Vec<Rational>, mut cycle: Vec<Rational>) -> Self {
        let p = cycle.len();
        if let Some(d) =
            (1..p).find(|&d| p.is_multiple_of(d) && (d..p).all(|i| cycle[i] == cycle[i - d]))
        {
            cycle.truncate(d);
        }
        while head.last().is_some() && head.last() == cycle.last() {
            head.pop();
            cycle.rotate_right(1);
        }
        Self { head, cycle }
    }

    pub fn head(&self) -> &[Rational] {
        &self.head
    }

    pub fn cycle(&self) -> &[Rational] {
        &self.cycle
    }

    pub fn head_len(&self) -> u64 {
        self.head.len() as u64
    }

    pub fn period(&self) -> u64 {
        self.cycle.len() as u64
    }

    pub fn is_periodic(&self) -> bool {
        self.head.is_empty()
    }

    /// `u_t`, for `t >= 1`.
    pub fn value_at(&self, t: u64) -> &Rational {
        assert!(t >= 1, "generation indices start at 1");
        let h = self.head_len();
        if t <= h {
            &self.head[(t - 1) as usize]
        } else {
            &self.cycle[((t - h - 1) % self.period()) as usize]
        }
    }

    /// `sum_{t <= horizon} u_t`, in time linear in head and cycle length.
    pub fn partial_sum(&self, horizon: u64) -> Rational {
        let h = self.head_len();
        if horizon <= h {
            return self.head[..horizon as usize].iter().sum();
        }
        let head_sum: Rational = self.head.iter().sum();
        let rest = horizon - h;
        let (full, partial) = rest.div_rem(&self.period());
        let cycle_sum: Rational = self.cycle.iter().sum();
        let partial_sum: Rational = self.cycle[..partial as usize].iter().sum();
        head_sum + cycle_sum * Rational::from_integer(full.into()) + partial_sum
    }

    pub fn cycle_mean(&self) -> Rational {
        let sum: Rational = self.cycle.iter().sum();
        sum / Rational::from_integer(self.period().into())
    }

    pub fn cycle_min(&self) -> &Rational {
        self.cycle.iter().min().expect("nonempty cycle")
    }

    pub fn cycle_max(&self) -> &Rational {
        self.cycle.iter().max().expect("nonempty cycle")
    }

    /// `inf_t u_t`, attained on head or cycle.
    pub fn infimum(&self) -> &Rational {
        self.head
            .iter()
            .chain(&self.cycle)
            .min()
            .expect("nonempty cycle")
    }

    pub fn sup_abs(&self) -> Rational {
        self.head
            .iter()
            .chain(&self.cycle)
            .map(|x| x.abs())
            .max()
            .expect("nonempty cycle")
    }

    fn common_shape(&self, other: &Self) -> (u64, u64) {
        (
            self.head_len().max(other.head_len()),
            self.period().lcm(&other.period()),
        )
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let (h, p) = self.common_shape(other);
        Self::from_fn(h, p, |t| self.value_at(t) + other.value_at(t))
    }

    /// Pointwise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        let (h, p) = self.common_shape(other);
        Self::from_fn(h, p, |t| self.value_at(t) - other.value_at(t))
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        Self::canonical(
            self.head.iter().map(|x| x * alpha).collect(),
            self.cycle.iter().map(|x| x * alpha).collect(),
        )
    }

    /// `self + c * 1_N`.
    pub fn shift(&self, c: &Rational) -> Self {
        Self::canonical(
            self.head.iter().map(|x| x + c).collect(),
            self.cycle.iter().map(|x| x + c).collect(),
        )
    }

    /// The T-tail `(u_{T+1}, u_{T+2}, ..)`.
    pub fn tail(&self, skip: u64) -> Self {
        let h = self.head_len().saturating_sub(skip);
        Self::from_fn(h, self.period(), |t| self.value_at(t + skip).clone())
    }

    /// `u^pi`: coordinate t holds `u_{pi(t)}`.
    pub fn apply_finite_permutation(&self, pi: &FinitePermutation) -> Self {
        let h = self.head_len().max(pi.horizon());
        Self::from_fn(h, self.period(), |t| self.value_at(pi.apply(t)).clone())
    }

    /// Blockwise permutation; the result is periodic with period
    /// `lcm(step, period)` once past both the head and the explicit blocks.
    pub fn apply_fixed_step_permutation(&self, pi: &FixedStepPermutation) -> Self {
        let k = pi.step();
        let blocks = (pi.explicit_blocks() as u64).max(self.head_len().div_ceil(k));
        let p = k.lcm(&self.period());
        Self::from_fn(blocks * k, p, |t| self.value_at(pi.apply(t)).clone())
    }

    /// `[u_1..u_T]_rep`.
    pub fn replicate_prefix(&self, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Parameter("replication length must be >= 1".into()));
        }
        Ok(Self::from_fn(0, horizon, |t| self.value_at(t).clone()))
    }

    /// `(u_1..u_T, mu_T(u) 1_N)`.
    pub fn mean_complete(&self, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Parameter("completion horizon must be >= 1".into()));
        }
        let head = (1..=horizon).map(|t| self.value_at(t).clone()).collect();
        let mean = self.partial_sum(horizon) / Rational::from_integer(horizon.into());
        Ok(Self::canonical(head, vec![mean]))
    }

    /// Adds `beta` at `i` and subtracts it at `j`, preserving `u_i + u_j`.
    pub fn transfer(&self, i: u64, j: u64, beta: &Rational) -> Result<Self> {
        if i == 0 || j == 0 {
            return Err(Error::Parameter("generation indices start at 1".into()));
        }
        if i == j {
            return Err(Error::Parameter(
                "transfer needs two distinct generations".into(),
            ));
        }
        let h = self.head_len().max(i).max(j);
        Ok(Self::from_fn(h, self.period(), |t| {
            let x = self.value_at(t);
            if t == i {
                x + beta
            } else if t == j {
                x - beta
            } else {
                x.clone()
            }
        }))
    }

    /// `u + alpha 1_{t}`.
    pub fn add_indicator(&self, t: u64, alpha: &Rational) -> Result<Self> {
        if t == 0 {
            return Err(Error::Parameter("generation indices start at 1".into()));
        }
        let h = self.head_len().max(t);
        Ok(Self::from_fn(h, self.period(), |s| {
            let x = self.value_at(s);
            if s == t {
                x + alpha
            } else {
                x.clone()
            }
        }))
    }

    /// Smallest horizon `H` such that agreement on `1..=H` forces equality.
    pub fn agreement_horizon(&self, other: &Self) -> u64 {
        let (_, p) = self.common_shape(other);
        self.head_len() + other.head_len() + 2 * p
    }
}

impl fmt::Display for EpStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Rational]| {
            xs.iter()
                .map(rational::format_rational)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "head=[{}] cycle=[{}]",
            join(&self.head),
            join(&self.cycle)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ep(head: &[i64], cycle: &[i64]) -> EpStream {
        EpStream::from_ints(head, cycle).unwrap()
    }

    fn alternating() -> EpStream {
        ep(&[], &[1, 0])
    }

    fn agree_to(a: &EpStream, b: &EpStream, horizon: u64) -> bool {
        (1..=horizon).all(|t| a.value_at(t) == b.value_at(t))
    }

    #[test]
    fn empty_cycle_is_rejected() {
        assert!(matches!(
            EpStream::new(vec![int(1)], vec![]),
            Err(Error::MalformedStream(_))
        ));
    }

    #[test]
    fn canonical_forms() {
        let alt = alternating();
        assert_eq!(alt.head(), &[] as &[Rational]);
        assert_eq!(alt.cycle(), &[int(1), int(0)]);

        let c = ep(&[5], &[5]);
        assert!(c.head().is_empty());
        assert_eq!(c.cycle(), &[int(5)]);

        let a = ep(&[1, 0], &[1, 0]);
        assert_eq!(a, alt);
        // lcm of the candidate periods is 2
        assert!(agree_to(&a, &alt, 10 * 2));

        let rep = ep(&[], &[1, 2, 1, 2, 1, 2]);
        assert_eq!(rep.cycle(), &[int(1), int(2)]);

        // head absorbed through a rotation
        let rot = ep(&[3, 1, 2], &[1, 2]);
        assert_eq!(rot.head(), &[int(3)]);
        assert_eq!(rot.cycle(), &[int(1), int(2)]);
    }

    #[test]
    fn indexing() {
        assert_eq!(alternating().value_at(3), &int(1));
        assert_eq!(EpStream::constant(int(5)).value_at(1_000_000_000), &int(5));
        let s = ep(&[7], &[1, 2, 3]);
        assert_eq!(s.value_at(5), &int(1));
        assert_eq!(s.value_at(6), &int(2));
    }

    #[test]
    fn add_and_scale() {
        let sum = alternating().add(&ep(&[], &[0, 1]));
        assert_eq!(sum, EpStream::constant(int(1)));

        let doubled = alternating().scale(&int(2));
        assert_eq!(doubled.cycle(), &[int(2), int(0)]);

        let a = ep(&[1], &[0]);
        let b = ep(&[], &[1, 2]);
        let s = a.add(&b);
        assert_eq!(s.head(), &[int(2)]);
        assert_eq!(s.cycle(), &[int(2), int(1)]);
        for t in 1..=100 {
            assert_eq!(s.value_at(t), &(a.value_at(t) + b.value_at(t)));
        }
    }

    #[test]
    fn tails() {
        assert_eq!(alternating().tail(1), ep(&[], &[0, 1]));
        assert_eq!(ep(&[7], &[1, 2, 3]).tail(1), ep(&[], &[1, 2, 3]));
        let s = ep(&[4, 9], &[1, 2, 3]);
        assert_eq!(s.tail(0), s);
    }

    #[test]
    fn finite_permutations() {
        let swap = FinitePermutation::transposition(1, 2).unwrap();
        let permuted = alternating().apply_finite_permutation(&swap);
        assert_eq!(permuted, ep(&[0, 1], &[1, 0]));

        let id = FinitePermutation::identity(4);
        assert_eq!(alternating().apply_finite_permutation(&id), alternating());

        let s = ep(&[7], &[1, 2, 3]);
        let swap13 = FinitePermutation::transposition(1, 3).unwrap();
        let p = s.apply_finite_permutation(&swap13);
        // (2, 1, 7, 3, 1, 2, 3, ..)
        let expected = ep(&[2, 1, 7], &[3, 1, 2]);
        assert!(agree_to(&p, &expected, 50));
        assert_eq!(p, expected);
    }

    #[test]
    fn fixed_step_permutations() {
        let swap = FixedStepPermutation::new(2, vec![], vec![2, 1]).unwrap();
        assert_eq!(
            alternating().apply_fixed_step_permutation(&swap),
            ep(&[], &[0, 1])
        );

        let id = FixedStepPermutation::new(3, vec![vec![1, 2, 3]], vec![1, 2, 3]).unwrap();
        let s = ep(&[4], &[1, 2]);
        assert_eq!(s.apply_fixed_step_permutation(&id), s);

        let rot = FixedStepPermutation::new(3, vec![], vec![2, 3, 1]).unwrap();
        let r = ep(&[], &[1, 2, 3]).apply_fixed_step_permutation(&rot);
        let expected = ep(&[], &[2, 3, 1]);
        assert!(agree_to(&r, &expected, 60));
        assert_eq!(r, expected);
    }

    #[test]
    fn replicate_and_complete() {
        assert_eq!(alternating().replicate_prefix(2).unwrap(), alternating());
        assert_eq!(
            alternating().replicate_prefix(3).unwrap().cycle(),
            &[int(1), int(0), int(1)]
        );
        assert_eq!(
            ep(&[7], &[1]).replicate_prefix(1).unwrap(),
            EpStream::constant(int(7))
        );
        assert!(alternating().replicate_prefix(0).is_err());

        let m2 = alternating().mean_complete(2).unwrap();
        assert_eq!(m2.head(), &[int(1), int(0)]);
        assert_eq!(m2.cycle(), &[frac(1, 2)]);
        let c = EpStream::constant(frac(-3, 4));
        assert_eq!(c.mean_complete(5).unwrap(), c);
        let m3 = alternating().mean_complete(3).unwrap();
        assert_eq!(m3.head(), &[int(1), int(0), int(1)]);
        assert_eq!(m3.cycle(), &[frac(2, 3)]);
    }

    #[test]
    fn transfers_and_indicators() {
        let z = EpStream::zero();
        let t = z.transfer(1, 2, &int(1)).unwrap();
        assert_eq!(t, ep(&[1, -1], &[0]));
        let s = ep(&[2], &[1, 3]);
        assert_eq!(s.transfer(2, 5, &int(0)).unwrap(), s);
        let there = s.transfer(2, 5, &frac(3, 2)).unwrap();
        assert_eq!(there.transfer(2, 5, &frac(-3, 2)).unwrap(), s);
        assert!(s.transfer(3, 3, &int(1)).is_err());

        assert_eq!(z.add_indicator(1, &int(1)).unwrap(), ep(&[1], &[0]));
        assert_eq!(s.add_indicator(4, &int(0)).unwrap(), s);
        let a = alternating().add_indicator(2, &int(1)).unwrap();
        let expected = ep(&[1, 1], &[1, 0]);
        assert!(agree_to(&a, &expected, 20));
        assert_eq!(a, expected);
    }

    #[test]
    fn partial_sums_match_direct_summation() {
        let s = ep(&[7, -2], &[1, 2, 3]);
        let mut running = Rational::zero();
        for t in 1..=40 {
            running += s.value_at(t);
            assert_eq!(s.partial_sum(t), running);
        }
        assert_eq!(s.partial_sum(0), Rational::zero());
    }
}
