//! Exact rational scalars.
//!
//! `Rational` is [`num_rational::BigRational`]: arbitrary-precision and kept in
//! lowest terms with a positive denominator by every constructor.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Maximum number of fractional digits accepted in a decimal literal.
pub const MAX_FRACTION_DIGITS: usize = 12;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, an integer, or a plain decimal literal with at most
/// [`MAX_FRACTION_DIGITS`] fractional digits. The result is exact.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = |reason: &str| Error::RationalParse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_int(num.trim()).ok_or_else(|| err("bad numerator"))?;
        let d = parse_int(den.trim()).ok_or_else(|| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, fraction) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && fraction.is_empty() {
        return Err(err("no digits"));
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !fraction.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err("expected p/q or a plain decimal literal"));
    }
    if fraction.len() > MAX_FRACTION_DIGITS {
        return Err(err("more than 12 fractional digits"));
    }
    let digits = format!("{whole}{fraction}");
    let mantissa: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err("bad digits"))?
    };
    let scale = num_traits::pow(BigInt::from(10), fraction.len());
    let value = Rational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerators or denominators: fall back on the crate's scaled conversion
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("3/-6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), frac(1, 10));
        assert_eq!(parse_rational("-2.25").unwrap(), frac(-9, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert_eq!(
            parse_rational("0.000000000001").unwrap(),
            frac(1, 1_000_000_000_000)
        );
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("0.0000000000001").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("-").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&frac(2, 4)), "1/2");
        assert_eq!(format_rational(&frac(-3, 1)), "-3");
        assert_eq!(format_rational(&int(0)), "0");
    }
}
