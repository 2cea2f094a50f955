//! Decision procedures for the Cesàro, catching-up and fixed-step
//! catching-up criteria on eventually-periodic streams.
//!
//! Both catching-up criteria only look at the partial-sum difference
//! `D_T = sum_{t<=T} (u_t - v_t)`. Past `H0 = max(|head_u|, |head_v|)` it obeys
//! `D_{T+P} = D_T + drift` with `P = lcm(|cycle_u|, |cycle_v|)`, so the pair
//! `(drift, window)` of a [`DifferenceProfile`] decides both exactly.
//!
//! Strict parts follow the usual convention: `u > v` iff `u >= v` and not
//! `v >= u`.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::stream::{EpStream, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    StrictlyBetter,
    Equivalent,
    StrictlyWorse,
    Incomparable,
    Unknown,
}

impl Verdict {
    /// The verdict for the swapped pair.
    pub fn mirror(self) -> Self {
        match self {
            Verdict::StrictlyBetter => Verdict::StrictlyWorse,
            Verdict::StrictlyWorse => Verdict::StrictlyBetter,
            other => other,
        }
    }

    /// `u >= v` holds.
    pub fn at_least(self) -> bool {
        matches!(self, Verdict::StrictlyBetter | Verdict::Equivalent)
    }

    /// From the two weak relations `u >= v` and `v >= u`.
    pub fn from_relations(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, true) => Verdict::Equivalent,
            (true, false) => Verdict::StrictlyBetter,
            (false, true) => Verdict::StrictlyWorse,
            (false, false) => Verdict::Incomparable,
        }
    }

    pub fn from_ordering(ord: std::cmp::Ordering) -> Self {
        match ord {
            std::cmp::Ordering::Greater => Verdict::StrictlyBetter,
            std::cmp::Ordering::Equal => Verdict::Equivalent,
            std::cmp::Ordering::Less => Verdict::StrictlyWorse,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::StrictlyBetter => "StrictlyBetter",
            Verdict::Equivalent => "Equivalent",
            Verdict::StrictlyWorse => "StrictlyWorse",
            Verdict::Incomparable => "Incomparable",
            Verdict::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Supporting data for a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Fixed-step verdict certified at multiples of `k`.
    Step { k: u64 },
    /// The partial-sum comparison holds for every `T >= from`.
    From { from: u64 },
    /// `D_T > 0` at `positive` and `D_T < 0` at `negative`, recurring forever.
    Crossings { positive: u64, negative: u64 },
    /// The oracle's horizon could not settle the quantifiers.
    Horizon { horizon: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl ComparisonResult {
    pub fn new(verdict: Verdict) -> Self {
        Self {
            verdict,
            witness: None,
        }
    }

    pub fn with_witness(verdict: Verdict, witness: Witness) -> Self {
        Self {
            verdict,
            witness: Some(witness),
        }
    }
}

/// Which partial-sum inequality a check asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `D_T >= 0`, i.e. `u` at least as good as `v`.
    AtLeast,
    /// `D_T <= 0`.
    AtMost,
}

impl Direction {
    fn admits(self, d: &Rational) -> bool {
        match self {
            Direction::AtLeast => !d.is_negative(),
            Direction::AtMost => !d.is_positive(),
        }
    }
}

/// Exact partial-sum structure of `u - v`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceProfile {
    period: u64,
    stable_from: u64,
    /// `D_T` for `T = 0..=stable_from`.
    prefix: Vec<Rational>,
    /// `D_T` for `T` in `[stable_from, stable_from + period)`.
    window: Vec<Rational>,
    drift: Rational,
}

impl DifferenceProfile {
    pub fn new(u: &EpStream, v: &EpStream) -> Self {
        let period = u.period().lcm(&v.period());
        let stable_from = u.head_len().max(v.head_len());
        let mut sums = Vec::with_capacity((stable_from + 2 * period + 1) as usize);
        let mut d = Rational::zero();
        sums.push(d.clone());
        for t in 1..=stable_from + 2 * period {
            d += u.value_at(t) - v.value_at(t);
            sums.push(d.clone());
        }
        let h = stable_from as usize;
        let p = period as usize;
        let drift = &sums[h + p] - &sums[h];
        debug_assert!((h..h + p).all(|t| sums[t + p] == &sums[t] + &drift));
        Self {
            period,
            stable_from,
            prefix: sums[..=h].to_vec(),
            window: sums[h..h + p].to_vec(),
            drift,
        }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn stable_from(&self) -> u64 {
        self.stable_from
    }

    pub fn drift(&self) -> &Rational {
        &self.drift
    }

    pub fn window(&self) -> &[Rational] {
        &self.window
    }

    /// `D_T` for any `T >= 0`.
    pub fn partial_difference(&self, t: u64) -> Rational {
        if t <= self.stable_from {
            return self.prefix[t as usize].clone();
        }
        let (q, r) = (t - self.stable_from).div_rem(&self.period);
        &self.window[r as usize] + &self.drift * Rational::from_integer(q.into())
    }

    fn drift_admits(&self, dir: Direction) -> bool {
        dir.admits(&self.drift)
    }

    /// Does `D_T` satisfy `dir` for every `T >= from`?
    pub fn holds_from(&self, from: u64, dir: Direction) -> bool {
        let from = from.max(1);
        if (from..self.stable_from).any(|t| !dir.admits(&self.prefix[t as usize])) {
            return false;
        }
        if !self.drift_admits(dir) {
            return false;
        }
        // with admissible drift each residue class is worst at its first visit
        let start = from.max(self.stable_from);
        (start..start + self.period).all(|t| dir.admits(&self.partial_difference(t)))
    }

    /// Does `D_{kT}` satisfy `dir` for every `T >= 1`?
    pub fn holds_at_multiples(&self, k: u64, dir: Direction) -> bool {
        assert!(k >= 1, "step must be >= 1");
        let first_stable = self.stable_from.div_ceil(k).max(1);
        if (1..first_stable).any(|m| !dir.admits(&self.prefix[(m * k) as usize])) {
            return false;
        }
        if !self.drift_admits(dir) {
            return false;
        }
        let cycle = self.period / self.period.gcd(&k);
        (first_stable..first_stable + cycle).all(|m| dir.admits(&self.partial_difference(m * k)))
    }
}

/// `u` vs `v` by Cesàro average.
pub fn compare_cesaro(u: &EpStream, v: &EpStream) -> ComparisonResult {
    ComparisonResult::new(Verdict::from_ordering(u.cycle_mean().cmp(&v.cycle_mean())))
}

/// Catching-up: `u >= v` iff `D_T >= 0` for all large `T`.
pub fn compare_catching_up(u: &EpStream, v: &EpStream) -> ComparisonResult {
    catching_up_from_profile(&DifferenceProfile::new(u, v))
}

pub fn catching_up_from_profile(profile: &DifferenceProfile) -> ComparisonResult {
    let drift = profile.drift();
    if drift.is_positive() {
        return ComparisonResult::new(Verdict::StrictlyBetter);
    }
    if drift.is_negative() {
        return ComparisonResult::new(Verdict::StrictlyWorse);
    }
    let h = profile.stable_from();
    let p = profile.period();
    // with zero drift D_{h+P} = D_h, so index h == 0 can be read at P instead
    let index = |offset: usize| {
        let t = h + offset as u64;
        if t == 0 {
            p
        } else {
            t
        }
    };
    let positive = profile.window().iter().position(|d| d.is_positive());
    let negative = profile.window().iter().position(|d| d.is_negative());
    let from = h.max(1);
    match (positive, negative) {
        (None, None) => ComparisonResult::with_witness(Verdict::Equivalent, Witness::From { from }),
        (Some(_), None) => {
            ComparisonResult::with_witness(Verdict::StrictlyBetter, Witness::From { from })
        }
        (None, Some(_)) => {
            ComparisonResult::with_witness(Verdict::StrictlyWorse, Witness::From { from })
        }
        (Some(pos), Some(neg)) => ComparisonResult::with_witness(
            Verdict::Incomparable,
            Witness::Crossings {
                positive: index(pos),
                negative: index(neg),
            },
        ),
    }
}

/// Fixed-step catching-up: `u >= v` iff for some `k`, `D_{kT} >= 0` for all
/// `T >= 1`. The witness is the least multiple of the common period, at or
/// past the heads, that certifies the verdict.
pub fn compare_fixed_step(u: &EpStream, v: &EpStream) -> ComparisonResult {
    fixed_step_from_profile(&DifferenceProfile::new(u, v))
}

pub fn fixed_step_from_profile(profile: &DifferenceProfile) -> ComparisonResult {
    let p = profile.period();
    let minimal_step = |ok: &dyn Fn(u64) -> bool| -> u64 {
        (profile.stable_from().div_ceil(p).max(1)..)
            .map(|m| m * p)
            .find(|&k| ok(k))
            .expect("a multiple of the period past the head always certifies")
    };
    let drift = profile.drift();
    let verdict = if drift.is_positive() {
        Verdict::StrictlyBetter
    } else if drift.is_negative() {
        Verdict::StrictlyWorse
    } else {
        // any k has kT == 0 (mod P) in the stable region, where D equals this
        let anchor = profile.stable_from().div_ceil(p) * p;
        Verdict::from_ordering(profile.partial_difference(anchor).cmp(&Rational::zero()))
    };
    let k = match verdict {
        Verdict::StrictlyBetter => {
            minimal_step(&|k| profile.holds_at_multiples(k, Direction::AtLeast))
        }
        Verdict::StrictlyWorse => {
            minimal_step(&|k| profile.holds_at_multiples(k, Direction::AtMost))
        }
        _ => minimal_step(&|k| {
            profile.holds_at_multiples(k, Direction::AtLeast)
                && profile.holds_at_multiples(k, Direction::AtMost)
        }),
    };
    ComparisonResult::with_witness(verdict, Witness::Step { k })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "C")]
    CatchingUp,
    #[serde(rename = "fixC")]
    FixedStep,
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "C" | "c" | "catching_up" => Ok(Criterion::CatchingUp),
            "fixC" | "fixc" | "fix-C" | "fixed_step" => Ok(Criterion::FixedStep),
            other => Err(Error::Parameter(format!(
                "unknown criterion `{other}` (expected C or fixC)"
            ))),
        }
    }
}

/// Horizon the oracle needs on an `Ep` pair: `H0 + 50 P`.
pub fn oracle_horizon(u: &EpStream, v: &EpStream) -> u64 {
    u.head_len().max(v.head_len()) + 50 * u.period().lcm(&v.period())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Settled {
    Holds,
    Fails,
    Open,
}

/// Sign of each `D_T`, `T = 1..=horizon`; index 0 is unused.
fn difference_signs(u: &Stream, v: &Stream, horizon: u64) -> Result<Vec<i8>> {
    let mut signs = Vec::with_capacity(horizon as usize + 1);
    signs.push(0);
    match (u, v) {
        (Stream::Ep(a), Stream::Ep(b)) => {
            let mut d = Rational::zero();
            for t in 1..=horizon {
                d += a.value_at(t) - b.value_at(t);
                signs.push(sign_of(&d));
            }
        }
        _ => {
            let (a, b) = (u.approx_view(), v.approx_view());
            let mut d = 0.0f64;
            for t in 1..=horizon {
                d += a.at(t)? - b.at(t)?;
                signs.push(if d > 0.0 {
                    1
                } else if d < 0.0 {
                    -1
                } else {
                    0
                });
            }
        }
    }
    Ok(signs)
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Tests the defining quantifiers directly on `T <= horizon`.
///
/// * C: `u >= v` is accepted when `D_T >= 0` on the whole second half of the
///   horizon and rejected when it fails somewhere in the last quarter.
/// * fixC: accepted when some `k <= kmax` has `D_{kT} >= 0` for every
///   `kT <= horizon`; rejected when every `k <= kmax` fails at some
///   `kT` in the second half.
///
/// Anything else is `Unknown`. Works on bounded streams as well, where the
/// sign tests are in floating point.
pub fn brute_force_compare(
    u: &Stream,
    v: &Stream,
    criterion: Criterion,
    horizon: u64,
    kmax: u64,
) -> Result<ComparisonResult> {
    if kmax == 0 || horizon < 4 {
        return Err(Error::Parameter("need kmax >= 1 and horizon >= 4".into()));
    }
    if let (Stream::Ep(a), Stream::Ep(b)) = (u, v) {
        let needed = oracle_horizon(a, b);
        if horizon < needed {
            return Err(Error::Parameter(format!(
                "horizon {horizon} is below H0 + 50P = {needed}"
            )));
        }
    }
    let signs = difference_signs(u, v, horizon)?;
    let relation = |want: i8| -> Settled {
        // want = 1: D >= 0 (u >= v); want = -1: D <= 0 (v >= u)
        let bad = |t: u64| signs[t as usize] == -want;
        match criterion {
            Criterion::CatchingUp => {
                let half = horizon.div_ceil(2);
                let quarter = (3 * horizon).div_ceil(4);
                if !(half..=horizon).any(bad) {
                    Settled::Holds
                } else if (quarter..=horizon).any(bad) {
                    Settled::Fails
                } else {
                    Settled::Open
                }
            }
            Criterion::FixedStep => {
                let half = horizon.div_ceil(2);
                let mut all_refuted = true;
                for k in 1..=kmax {
                    let multiples = (1..=horizon / k).map(|m| m * k);
                    if !multiples.clone().any(bad) {
                        return Settled::Holds;
                    }
                    if !multiples.filter(|&t| t >= half).any(bad) {
                        all_refuted = false;
                    }
                }
                if all_refuted {
                    Settled::Fails
                } else {
                    Settled::Open
                }
            }
        }
    };
    let verdict = match (relation(1), relation(-1)) {
        (Settled::Open, _) | (_, Settled::Open) => {
            return Ok(ComparisonResult::with_witness(
                Verdict::Unknown,
                Witness::Horizon { horizon },
            ))
        }
        (f, b) => Verdict::from_relations(f == Settled::Holds, b == Settled::Holds),
    };
    Ok(ComparisonResult::new(verdict))
}

/// `u >=^C v` implies `u >=^{fix-C} v` for this pair.
pub fn check_c_implies_fixc(u: &EpStream, v: &EpStream) -> bool {
    let profile = DifferenceProfile::new(u, v);
    !catching_up_from_profile(&profile).verdict.at_least()
        || fixed_step_from_profile(&profile).verdict.at_least()
}

impl fmt::Display for DifferenceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let window: Vec<String> = self.window.iter().map(rational::format_rational).collect();
        write!(
            f,
            "P={} H0={} drift={} window=[{}]",
            self.period,
            self.stable_from,
            rational::format_rational(&self.drift),
            window.join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn ep(head: &[i64], cycle: &[i64]) -> EpStream {
        EpStream::from_ints(head, cycle).unwrap()
    }

    /// Independent check of the fixed-step relation for one `k`, by direct
    /// summation over `T <= limit`.
    fn direct_multiples(u: &EpStream, v: &EpStream, k: u64, limit: u64, dir: Direction) -> bool {
        let mut d = Rational::zero();
        for t in 1..=k * limit {
            d += u.value_at(t) - v.value_at(t);
            if t % k == 0 && !dir.admits(&d) {
                return false;
            }
        }
        true
    }

    #[test]
    fn profile_structure() {
        let p = DifferenceProfile::new(&ep(&[3], &[1, -2, 1]), &EpStream::zero());
        assert_eq!(p.period(), 3);
        assert_eq!(p.stable_from(), 1);
        assert_eq!(p.drift(), &Rational::zero());
        let mut d = Rational::zero();
        let u = ep(&[3], &[1, -2, 1]);
        for t in 1..=60 {
            d += u.value_at(t);
            assert_eq!(p.partial_difference(t), d);
        }
    }

    #[test]
    fn cesaro_examples() {
        let alt = ep(&[], &[1, 0]);
        let half = EpStream::constant(frac(1, 2));
        assert_eq!(compare_cesaro(&alt, &half).verdict, Verdict::Equivalent);
        assert_eq!(
            compare_cesaro(&EpStream::constant(frac(1, 1)), &EpStream::zero()).verdict,
            Verdict::StrictlyBetter
        );
        let big_head = ep(&[1_000_000], &[0]);
        assert_eq!(
            compare_cesaro(&big_head, &EpStream::zero()).verdict,
            Verdict::Equivalent
        );
        // oracle: mu_T at T = 10^6 is 1, which tends to 0 as T grows
        assert_eq!(
            big_head.partial_sum(1_000_000),
            Rational::from_integer(1_000_000.into())
        );
    }

    #[test]
    fn catching_up_examples() {
        let u = ep(&[], &[1, 0]);
        let v = ep(&[], &[0, 1]);
        assert_eq!(compare_catching_up(&u, &v).verdict, Verdict::StrictlyBetter);
        assert_eq!(
            compare_catching_up(&ep(&[1, -1], &[0]), &EpStream::zero()).verdict,
            Verdict::Equivalent
        );
        let r = compare_catching_up(&ep(&[], &[1, -2, 1]), &EpStream::zero());
        assert_eq!(r.verdict, Verdict::Incomparable);
        assert_eq!(
            r.witness,
            Some(Witness::Crossings {
                positive: 1,
                negative: 2
            })
        );
    }

    #[test]
    fn fixed_step_examples() {
        let r = compare_fixed_step(&ep(&[], &[1, 0]), &ep(&[], &[0, 1]));
        assert_eq!(
            r,
            ComparisonResult::with_witness(Verdict::Equivalent, Witness::Step { k: 2 })
        );

        let u = ep(&[], &[1, -2, 1]);
        let r = compare_fixed_step(&u, &EpStream::zero());
        assert_eq!(
            r,
            ComparisonResult::with_witness(Verdict::Equivalent, Witness::Step { k: 3 })
        );
        // oracle: direct D_{kT}, k <= 6, T <= 200
        let z = EpStream::zero();
        let valid: Vec<u64> = (1..=6)
            .filter(|&k| {
                direct_multiples(&u, &z, k, 200, Direction::AtLeast)
                    && direct_multiples(&u, &z, k, 200, Direction::AtMost)
            })
            .collect();
        assert_eq!(valid, vec![3, 6]);

        assert_eq!(
            compare_fixed_step(&EpStream::constant(frac(1, 1)), &z).verdict,
            Verdict::StrictlyBetter
        );
    }

    #[test]
    fn fixed_step_with_heads() {
        // D_T = T - 6, so D_{kT} >= 0 for all T needs k >= 6
        let u = ep(&[-5], &[1]);
        let z = EpStream::zero();
        let r = compare_fixed_step(&u, &z);
        assert_eq!(r.verdict, Verdict::StrictlyBetter);
        assert_eq!(r.witness, Some(Witness::Step { k: 6 }));
        // head-only difference with zero drift: D_T = 2 for T >= 1
        let r = compare_fixed_step(&ep(&[2], &[0]), &z);
        assert_eq!(r.verdict, Verdict::StrictlyBetter);
        assert_eq!(r.witness, Some(Witness::Step { k: 1 }));
    }

    #[test]
    fn holds_at_multiples_matches_direct_summation() {
        let cases = [
            (ep(&[2, -3], &[1, -1, 0]), ep(&[1], &[0, 1])),
            (ep(&[], &[1, -2, 1]), EpStream::zero()),
            (ep(&[-4], &[2, -1]), ep(&[0, 0, 1], &[0])),
        ];
        for (u, v) in &cases {
            let p = DifferenceProfile::new(u, v);
            for k in 1..=8 {
                for dir in [Direction::AtLeast, Direction::AtMost] {
                    assert_eq!(
                        p.holds_at_multiples(k, dir),
                        direct_multiples(u, v, k, 400, dir),
                        "{u} vs {v}, k={k}, {dir:?}"
                    );
                }
            }
            for from in 1..=6 {
                for dir in [Direction::AtLeast, Direction::AtMost] {
                    let mut d = p.partial_difference(from - 1);
                    let mut ok = true;
                    for t in from..=400 {
                        d += u.value_at(t) - v.value_at(t);
                        ok &= dir.admits(&d);
                    }
                    assert_eq!(p.holds_from(from, dir), ok);
                }
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        let u = Stream::Ep(ep(&[], &[1, 0]));
        let v = Stream::Ep(ep(&[], &[0, 1]));
        let c = brute_force_compare(&u, &v, Criterion::CatchingUp, 100, 12).unwrap();
        assert_eq!(c.verdict, Verdict::StrictlyBetter);
        let f = brute_force_compare(&u, &v, Criterion::FixedStep, 100, 12).unwrap();
        assert_eq!(f.verdict, Verdict::Equivalent);

        let w = Stream::Ep(ep(&[], &[1, -2, 1]));
        let z = Stream::Ep(EpStream::zero());
        let f = brute_force_compare(&w, &z, Criterion::FixedStep, 150, 6).unwrap();
        assert_eq!(f.verdict, Verdict::Equivalent);
        let c = brute_force_compare(&w, &z, Criterion::CatchingUp, 150, 6).unwrap();
        assert_eq!(c.verdict, Verdict::Incomparable);

        let e = brute_force_compare(&z, &z, Criterion::CatchingUp, 50, 1).unwrap();
        assert_eq!(e.verdict, Verdict::Equivalent);
        assert!(brute_force_compare(&w, &z, Criterion::CatchingUp, 100, 6).is_err());
    }

    #[test]
    fn implication_examples() {
        assert!(check_c_implies_fixc(&ep(&[], &[1, 0]), &ep(&[], &[0, 1])));
        assert!(check_c_implies_fixc(
            &EpStream::constant(frac(1, 1)),
            &EpStream::zero()
        ));
    }

    #[test]
    fn verdict_helpers() {
        assert_eq!(Verdict::StrictlyBetter.mirror(), Verdict::StrictlyWorse);
        assert_eq!(Verdict::Incomparable.mirror(), Verdict::Incomparable);
        assert_eq!(Verdict::from_relations(false, false), Verdict::Incomparable);
        assert!("fixC".parse::<Criterion>().is_ok());
        assert!("bogus".parse::<Criterion>().is_err());
    }
}
