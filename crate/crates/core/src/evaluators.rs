//! Welfare functionals on streams.
//!
//! On [`EpStream`]s everything limit-based is exact: the Cesàro average is the
//! cycle mean and `W1..W4` all coincide with it. On bounded streams the
//! liminf/limsup quantities are *estimates* from finite sweeps, never
//! certified bounds.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::stream::{EpStream, Scalar, Stream};

/// Floating-point tolerance for identities evaluated in `f64`.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Tolerance the Abel identity truncation must reach.
pub const ABEL_TRUNCATION_TOLERANCE: f64 = 1e-10;

/// Number of trailing grid points used for discounted limit estimates.
pub const LIMIT_TAIL_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::Parameter(format!(
                "interval lower {lower} exceeds upper {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn point(x: f64) -> Self {
        Self { lower: x, upper: x }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// `x` lies in the interval widened by `tol` on both sides.
    pub fn brackets(&self, x: f64, tol: f64) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    fn hull(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        values.into_iter().fold(None, |acc, x| match acc {
            None => Some(Self::point(x)),
            Some(i) => Some(Self {
                lower: i.lower.min(x),
                upper: i.upper.max(x),
            }),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscountParams {
    pub delta: f64,
    pub truncation_tolerance: f64,
}

impl DiscountParams {
    pub fn new(delta: f64, truncation_tolerance: f64) -> Result<Self> {
        check_delta(delta)?;
        if truncation_tolerance.is_nan() || truncation_tolerance <= 0.0 {
            return Err(Error::Parameter(
                "truncation tolerance must be positive".into(),
            ));
        }
        Ok(Self {
            delta,
            truncation_tolerance,
        })
    }

    /// Smallest `N` with `delta^N * bound <= tolerance`, which bounds the
    /// normalized tail `(1 - delta) sum_{t > N} delta^(t-1) |u_t|`.
    pub fn truncation_length(&self, bound: f64) -> u64 {
        if bound <= self.truncation_tolerance {
            return 1;
        }
        let n = (self.truncation_tolerance / bound).ln() / self.delta.ln();
        n.ceil().max(1.0) as u64
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "discount factor {delta} is not in (0,1)"
        )))
    }
}

/// `mu_T(u) = (1/T) sum_{t <= T} u_t`.
pub fn partial_mean(s: &Stream, horizon: u64) -> Result<Scalar> {
    if horizon == 0 {
        return Err(Error::Parameter("mean horizon must be >= 1".into()));
    }
    match s {
        Stream::Ep(ep) => Ok(Scalar::Exact(ep_partial_mean(ep, horizon))),
        Stream::Bounded(b) => {
            let mut sum = 0.0;
            for t in 1..=horizon {
                sum += b.value_at(t)?;
            }
            Ok(Scalar::Approx(sum / horizon as f64))
        }
    }
}

pub fn ep_partial_mean(s: &EpStream, horizon: u64) -> Rational {
    s.partial_sum(horizon) / Rational::from_integer(horizon.into())
}

/// `mu_inf(u)`: the cycle mean. The head has no effect.
pub fn cesaro_average(s: &EpStream) -> Rational {
    s.cycle_mean()
}

/// Running means `mu_{kT}` for `T = 1..=horizon/k`.
fn kstep_means(s: &Stream, k: u64, horizon: u64) -> Result<Vec<f64>> {
    let view = s.approx_view();
    let n = horizon / k;
    let mut means = Vec::with_capacity(n as usize);
    let mut sum = 0.0;
    let mut t = 0u64;
    for step in 1..=n {
        while t < step * k {
            t += 1;
            sum += view.at(t)?;
        }
        means.push(sum / t as f64);
    }
    Ok(means)
}

/// Estimates `[liminf_T mu_{kT}, limsup_T mu_{kT}]` as the range of `mu_{kT}`
/// over the last half of `T = 1..=horizon/k`. An estimate, not a bound.
pub fn cesaro_estimate(s: &Stream, k: u64, horizon: u64) -> Result<Interval> {
    if k == 0 {
        return Err(Error::Parameter("step k must be >= 1".into()));
    }
    if horizon < 10 * k {
        return Err(Error::Parameter(format!(
            "horizon {horizon} is below 10*k = {}",
            10 * k
        )));
    }
    let means = kstep_means(s, k, horizon)?;
    let half = means.len() / 2;
    Ok(Interval::hull(means[half..].iter().copied()).expect("nonempty sweep"))
}

/// Closed form `(1-delta)[sum_{t<=h} delta^(t-1) u_t + delta^h S_c / (1-delta^p)]`
/// with `S_c = sum_j delta^(j-1) c_j`. Stable as `delta -> 1`.
pub fn discounted_value(s: &EpStream, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let head: Vec<f64> = s.head().iter().map(rational::to_f64).collect();
    let cycle: Vec<f64> = s.cycle().iter().map(rational::to_f64).collect();
    let one_minus = 1.0 - delta;
    let mut weight = 1.0;
    let mut head_part = 0.0;
    for x in &head {
        head_part += weight * x;
        weight *= delta;
    }
    // weight == delta^h
    let mut cycle_part = 0.0;
    let mut w = 1.0;
    for x in &cycle {
        cycle_part += w * x;
        w *= delta;
    }
    let p = cycle.len() as f64;
    // 1 - delta^p without cancellation
    let one_minus_pow = -(p * (-one_minus).ln_1p()).exp_m1();
    Ok(one_minus * head_part + weight * cycle_part * (one_minus / one_minus_pow))
}

/// Exact discounted value for rational `delta`.
pub fn discounted_value_exact(s: &EpStream, delta: &Rational) -> Result<Rational> {
    if !(delta > &Rational::zero() && delta < &Rational::one()) {
        return Err(Error::Parameter(format!(
            "discount factor {} is not in (0,1)",
            rational::format_rational(delta)
        )));
    }
    let one = Rational::one();
    let mut weight = one.clone();
    let mut head_part = Rational::zero();
    for x in s.head() {
        head_part += &weight * x;
        weight *= delta;
    }
    let mut cycle_part = Rational::zero();
    let mut w = one.clone();
    for x in s.cycle() {
        cycle_part += &w * x;
        w *= delta;
    }
    // w == delta^p
    let factor = &one - delta;
    Ok(&factor * head_part + weight * cycle_part * &factor / (one - w))
}

/// Direct summation of `(1-delta) sum_{t<=N} delta^(t-1) u_t` with `N` chosen
/// by [`DiscountParams::truncation_length`] from the stream's bound.
pub fn discounted_value_truncated(s: &Stream, params: &DiscountParams) -> Result<f64> {
    let n = params.truncation_length(s.sup_bound());
    discounted_partial(s, params.delta, n)
}

/// `(1-delta) sum_{t<=n} delta^(t-1) u_t`, compensated summation.
pub fn discounted_partial(s: &Stream, delta: f64, n: u64) -> Result<f64> {
    check_delta(delta)?;
    let view = s.approx_view();
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    let mut weight = 1.0f64;
    for t in 1..=n {
        let term = weight * view.at(t)?;
        let next = sum + term;
        carry += if sum.abs() >= term.abs() {
            (sum - next) + term
        } else {
            (term - next) + sum
        };
        sum = next;
        weight *= delta;
    }
    Ok((1.0 - delta) * (sum + carry))
}

/// `delta_j = 1 - 2^-j` for `j = first..=last`.
pub fn delta_grid(first: u32, last: u32) -> Vec<f64> {
    (first..=last).map(|j| 1.0 - (-(j as f64)).exp2()).collect()
}

pub fn default_delta_grid() -> Vec<f64> {
    delta_grid(4, 20)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Parameter("empty discount grid".into()));
    }
    for &d in grid {
        check_delta(d)?;
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(
            "discount grid must increase toward 1".into(),
        ));
    }
    Ok(())
}

/// `sigma_delta` at every grid point: closed form for `Ep`, truncated sums
/// for bounded streams.
pub fn discounted_grid_values(s: &Stream, grid: &[f64], tolerance: f64) -> Result<Vec<f64>> {
    check_grid(grid)?;
    grid.par_iter()
        .map(|&delta| match s {
            Stream::Ep(ep) => discounted_value(ep, delta),
            Stream::Bounded(_) => {
                discounted_value_truncated(s, &DiscountParams::new(delta, tolerance)?)
            }
        })
        .collect()
}

/// `[W2, W3] = [liminf, limsup]_{delta -> 1} sigma_delta`.
///
/// Exact on `Ep` (both equal the Cesàro average). Otherwise the range of
/// `sigma_delta` over the last [`LIMIT_TAIL_POINTS`] grid points.
pub fn discounted_limit_interval(s: &Stream, grid: &[f64], tolerance: f64) -> Result<Interval> {
    check_grid(grid)?;
    if let Stream::Ep(ep) = s {
        return Ok(Interval::point(rational::to_f64(&cesaro_average(ep))));
    }
    let tail = &grid[grid.len().saturating_sub(LIMIT_TAIL_POINTS)..];
    let values = discounted_grid_values(s, tail, tolerance)?;
    Ok(Interval::hull(values).expect("nonempty grid"))
}

/// `W1 = sup_k liminf_T mu_{kT}` and `W4 = inf_k limsup_T mu_{kT}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KStepBounds {
    pub w1: Scalar,
    pub w4: Scalar,
}

/// Exact `(mu_inf, mu_inf)` on `Ep`; otherwise sup/inf over `k <= kmax` of
/// the [`cesaro_estimate`] endpoints.
pub fn kstep_mean_bounds(s: &Stream, kmax: u64, horizon: u64) -> Result<KStepBounds> {
    if kmax == 0 {
        return Err(Error::Parameter("kmax must be >= 1".into()));
    }
    if let Stream::Ep(ep) = s {
        let mu = cesaro_average(ep);
        return Ok(KStepBounds {
            w1: Scalar::Exact(mu.clone()),
            w4: Scalar::Exact(mu),
        });
    }
    let estimates = (1..=kmax)
        .into_par_iter()
        .map(|k| cesaro_estimate(s, k, horizon))
        .collect::<Result<Vec<_>>>()?;
    let w1 = estimates
        .iter()
        .map(|i| i.lower)
        .fold(f64::NEG_INFINITY, f64::max);
    let w4 = estimates
        .iter()
        .map(|i| i.upper)
        .fold(f64::INFINITY, f64::min);
    Ok(KStepBounds {
        w1: Scalar::Approx(w1),
        w4: Scalar::Approx(w4),
    })
}

/// All four bound functionals. Exact on `Ep`.
#[derive(Clone, Debug, PartialEq)]
pub struct BanachBounds {
    pub w1: Scalar,
    pub w2: Scalar,
    pub w3: Scalar,
    pub w4: Scalar,
}

pub fn banach_bounds(
    s: &Stream,
    kmax: u64,
    horizon: u64,
    grid: &[f64],
    tolerance: f64,
) -> Result<BanachBounds> {
    let KStepBounds { w1, w4 } = kstep_mean_bounds(s, kmax, horizon)?;
    let (w2, w3) = match s {
        Stream::Ep(ep) => {
            let mu = cesaro_average(ep);
            (Scalar::Exact(mu.clone()), Scalar::Exact(mu))
        }
        Stream::Bounded(_) => {
            let i = discounted_limit_interval(s, grid, tolerance)?;
            (Scalar::Approx(i.lower), Scalar::Approx(i.upper))
        }
    };
    Ok(BanachBounds { w1, w2, w3, w4 })
}

/// Upper bound on `(1-delta)^2 sum_{t>N} delta^(t-1) t B`, the part of the
/// Abel series dropped by truncating at `N`.
pub fn abel_tail_bound(delta: f64, bound: f64, n: u64) -> f64 {
    let n = n as f64;
    bound * delta.powf(n) * (n + 1.0 - n * delta)
}

/// Smallest `N` whose Abel tail bound is below `tolerance`.
pub fn abel_truncation(delta: f64, bound: f64, tolerance: f64) -> Result<u64> {
    check_delta(delta)?;
    if abel_tail_bound(delta, bound, 1) < tolerance {
        return Ok(1);
    }
    let mut hi = 2u64;
    while abel_tail_bound(delta, bound, hi) >= tolerance {
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| Error::Parameter("no finite truncation reaches the tolerance".into()))?;
    }
    let mut lo = hi / 2;
    // tail bound is decreasing for N >= delta/(1-delta), which the doubling passed
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if abel_tail_bound(delta, bound, mid) < tolerance {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `|sigma_delta(u) - (1-delta)^2 sum_{t<=N} delta^(t-1) t mu_t(u)|`, with the
/// closed form on the left and a running sum on the right.
pub fn abel_identity_residual(s: &EpStream, delta: f64, n: u64) -> Result<f64> {
    check_delta(delta)?;
    let bound = rational::to_f64(&s.sup_abs());
    let tail = abel_tail_bound(delta, bound, n);
    if tail.is_nan() || tail >= ABEL_TRUNCATION_TOLERANCE {
        return Err(Error::Parameter(format!(
            "N = {n} leaves an Abel tail of up to {tail:e} (need < {ABEL_TRUNCATION_TOLERANCE:e})"
        )));
    }
    let closed = discounted_value(s, delta)?;
    let stream = Stream::Ep(s.clone());
    let view = stream.approx_view();
    let mut running = 0.0; // t * mu_t
    let mut weight = 1.0;
    let mut series = 0.0;
    for t in 1..=n {
        running += view.at(t)?;
        series += weight * running;
        weight *= delta;
    }
    let scale = (1.0 - delta) * (1.0 - delta);
    Ok((closed - scale * series).abs())
}

/// One row of the Observation-style sandwich
/// `liminf mu_{kT} <= W2 <= W3 <= limsup mu_{kT}`, with slack `eps`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichCheck {
    pub k: u64,
    pub kstep: Interval,
    pub discounted: Interval,
    pub eps: f64,
    pub holds: bool,
}

pub fn sandwich_checks(
    s: &Stream,
    kmax: u64,
    horizon: u64,
    grid: &[f64],
    tolerance: f64,
    eps: f64,
) -> Result<Vec<SandwichCheck>> {
    let discounted = discounted_limit_interval(s, grid, tolerance)?;
    (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let kstep = match s {
                Stream::Ep(ep) => Interval::point(rational::to_f64(&cesaro_average(ep))),
                Stream::Bounded(_) => cesaro_estimate(s, k, horizon)?,
            };
            let holds = kstep.lower - eps <= discounted.lower
                && discounted.lower <= discounted.upper
                && discounted.upper <= kstep.upper + eps;
            Ok(SandwichCheck {
                k,
                kstep,
                discounted,
                eps,
                holds,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::stream::BoundedStream;

    fn ep(head: &[i64], cycle: &[i64]) -> EpStream {
        EpStream::from_ints(head, cycle).unwrap()
    }

    #[test]
    fn partial_means() {
        let alt = Stream::Ep(ep(&[], &[1, 0]));
        assert_eq!(partial_mean(&alt, 2).unwrap(), Scalar::Exact(frac(1, 2)));
        assert_eq!(partial_mean(&alt, 3).unwrap(), Scalar::Exact(frac(2, 3)));
        let c = Stream::Ep(EpStream::constant(frac(5, 7)));
        for t in [1, 9, 1000] {
            assert_eq!(partial_mean(&c, t).unwrap(), Scalar::Exact(frac(5, 7)));
        }
        assert!(partial_mean(&alt, 0).is_err());
        let b = Stream::Bounded(BoundedStream::doubling_blocks(0.0, 1.0, 1.0).unwrap());
        assert_eq!(partial_mean(&b, 3).unwrap(), Scalar::Approx(2.0 / 3.0));
    }

    #[test]
    fn cesaro_averages() {
        assert_eq!(cesaro_average(&ep(&[], &[1, 0])), frac(1, 2));
        assert_eq!(cesaro_average(&EpStream::constant(int(-4))), int(-4));
        assert_eq!(cesaro_average(&ep(&[7], &[1, 2, 3])), int(2));
    }

    #[test]
    fn cesaro_estimate_checks_horizon() {
        let c = Stream::Ep(EpStream::constant(int(3)));
        assert_eq!(cesaro_estimate(&c, 1, 100).unwrap(), Interval::point(3.0));
        assert!(cesaro_estimate(&c, 11, 100).is_err());
        assert!(cesaro_estimate(&c, 0, 100).is_err());
    }

    #[test]
    fn discounted_constant_and_parameter_errors() {
        let c = EpStream::constant(int(5));
        for d in [0.1, 0.5, 0.9, 0.999999] {
            assert!((discounted_value(&c, d).unwrap() - 5.0).abs() < 1e-12);
        }
        assert!(discounted_value(&c, 1.0).is_err());
        assert!(discounted_value(&c, 0.0).is_err());
        assert!(discounted_value(&c, -0.5).is_err());
        assert!(discounted_value_exact(&c, &int(1)).is_err());
    }

    #[test]
    fn exact_discount_matches_float() {
        let s = ep(&[7, -2], &[1, 2, 3]);
        let exact = discounted_value_exact(&s, &frac(9, 10)).unwrap();
        let approx = discounted_value(&s, 0.9).unwrap();
        assert!((rational::to_f64(&exact) - approx).abs() < 1e-12);
        assert_eq!(
            discounted_value_exact(&ep(&[], &[1, 0]), &frac(9, 10)).unwrap(),
            frac(10, 19)
        );
    }

    #[test]
    fn grid_shape() {
        let g = default_delta_grid();
        assert_eq!(g.len(), 17);
        assert_eq!(g[0], 1.0 - 1.0 / 16.0);
        assert_eq!(*g.last().unwrap(), 1.0 - 2f64.powi(-20));
        let s = Stream::Ep(EpStream::zero());
        assert!(discounted_limit_interval(&s, &[0.9, 0.5], 1e-9).is_err());
        assert!(discounted_limit_interval(&s, &[], 1e-9).is_err());
    }

    #[test]
    fn abel_truncation_is_minimal() {
        for (delta, bound) in [(0.5, 1.0), (0.9, 3.0), (0.99, 3.0)] {
            let n = abel_truncation(delta, bound, ABEL_TRUNCATION_TOLERANCE).unwrap();
            assert!(abel_tail_bound(delta, bound, n) < ABEL_TRUNCATION_TOLERANCE);
            assert!(abel_tail_bound(delta, bound, n - 1) >= ABEL_TRUNCATION_TOLERANCE);
        }
    }

    #[test]
    fn abel_residuals() {
        let c = EpStream::constant(int(3));
        assert!(abel_identity_residual(&c, 0.5, 200).unwrap() < FLOAT_TOLERANCE);
        let alt = ep(&[], &[1, 0]);
        assert!(abel_identity_residual(&alt, 0.9, 1000).unwrap() < FLOAT_TOLERANCE);
        let s = ep(&[7], &[1, 2, 3]);
        assert!(abel_identity_residual(&s, 0.99, 10_000).unwrap() < FLOAT_TOLERANCE);
        assert!(matches!(
            abel_identity_residual(&s, 0.99, 100),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn kstep_bounds_on_ep_are_exact() {
        let s = Stream::Ep(ep(&[9], &[1, 2, 6]));
        let b = kstep_mean_bounds(&s, 5, 1000).unwrap();
        assert_eq!(b.w1, Scalar::Exact(int(3)));
        assert_eq!(b.w4, Scalar::Exact(int(3)));
    }
}
