//! Exact rational thresholds.
//!
//! All gap thresholds and slack factors are `Ratio<i64>` values kept in
//! lowest terms with a positive denominator. Files store them as
//! `[numer, denom]` pairs and the CLI parses them from `"numer/denom"`
//! strings; floats never enter threshold logic.

use num_rational::Ratio;
use num_traits::Signed;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Largest magnitude accepted for a parsed numerator or denominator. Keeps
/// products of a handful of parsed rationals comfortably inside `i64`.
pub const PARSE_LIMIT: i64 = 1_000_000;

pub fn rational(numer: i64, denom: i64) -> Result<Rational> {
    if denom == 0 {
        return Err(Error::bad_params("rational denominator must be nonzero"));
    }
    Ok(Ratio::new(numer, denom))
}

/// Parses `"3/4"` or `"2"`. Rejects zero denominators and components larger
/// than [`PARSE_LIMIT`] in magnitude.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (parse_component(n)?, parse_component(d)?),
        None => (parse_component(s)?, 1),
    };
    if denom == 0 {
        return Err(Error::bad_params(format!("`{s}`: denominator is zero")));
    }
    Ok(Ratio::new(numer, denom))
}

fn parse_component(s: &str) -> Result<i64> {
    let v: i64 = s
        .trim()
        .parse()
        .map_err(|_| Error::bad_params(format!("`{s}` is not an integer")))?;
    if v.abs() > PARSE_LIMIT {
        return Err(Error::bad_params(format!(
            "`{s}` exceeds the supported magnitude {PARSE_LIMIT}"
        )));
    }
    Ok(v)
}

/// `(numer, denom)` in lowest terms, denominator positive. This is the
/// on-disk form.
pub fn to_pair(r: Rational) -> (i64, i64) {
    (*r.numer(), *r.denom())
}

/// Rebuilds a rational from an on-disk pair, normalizing sign and reducing.
/// `path` names the offending field on error.
pub fn from_pair(pair: (i64, i64), path: &str) -> Result<Rational> {
    if pair.1 <= 0 {
        return Err(Error::schema(path, "denominator must be positive"));
    }
    Ok(Ratio::new(pair.0, pair.1))
}

pub fn is_positive(r: Rational) -> bool {
    r.is_positive()
}

/// Floor of a nonnegative rational as usize.
pub fn floor_to_usize(r: Rational) -> Result<usize> {
    if r.is_negative() {
        return Err(Error::bad_params(format!("{r} is negative")));
    }
    Ok(r.floor().to_integer() as usize)
}

/// Ceiling of a nonnegative rational as usize.
pub fn ceil_to_usize(r: Rational) -> Result<usize> {
    if r.is_negative() {
        return Err(Error::bad_params(format!("{r} is negative")));
    }
    Ok(r.ceil().to_integer() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("9/10").unwrap(), Ratio::new(9, 10));
        assert_eq!(parse_rational("4").unwrap(), Ratio::new(4, 1));
        assert_eq!(parse_rational("6/4").unwrap(), Ratio::new(3, 2));
        assert_eq!(parse_rational("-1/2").unwrap(), Ratio::new(-1, 2));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("10000000/3").is_err());
    }

    #[test]
    fn pairs_round_trip_canonically() {
        let r = from_pair((6, 4), "t").unwrap();
        assert_eq!(to_pair(r), (3, 2));
        assert!(from_pair((1, 0), "t").is_err());
        assert!(from_pair((1, -2), "t").is_err());
    }

    #[test]
    fn integer_rounding() {
        assert_eq!(floor_to_usize(Ratio::new(5, 6)).unwrap(), 0);
        assert_eq!(floor_to_usize(Ratio::new(10, 3)).unwrap(), 3);
        assert_eq!(ceil_to_usize(Ratio::new(10, 3)).unwrap(), 4);
        assert_eq!(ceil_to_usize(Ratio::new(4, 1)).unwrap(), 4);
    }
}
