//! Exact rational scalars.
//!
//! Every boundary comparison made by the decision engine goes through these
//! types. Decimal input such as `"0.1"` or `"-2.5e-3"` is parsed digit by digit
//! into an exact fraction, never through a binary float.

use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational number.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as an exact rational: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Formats as `"n"` for integers and `"n/d"` otherwise.
pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"n/d"`, an integer, or a decimal with optional exponent.
pub fn parse_rational(input: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: input.to_string(),
        reason,
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = den.trim().parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| err("not a decimal number"))
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Q::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    if shift.unsigned_abs() > 100_000 {
        return None;
    }
    let ten = Q::from_integer(BigInt::from(10));
    let scale = num::pow::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(if negative { -value } else { value })
}

/// A real number that may be `+∞`, used for the Sobolev conjugate exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedReal {
    Finite(Q),
    PosInfinity,
}

impl ExtendedReal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::PosInfinity)
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PosInfinity => None,
        }
    }

    /// `x <= self`; always true when `self` is `+∞`.
    pub fn ge_q(&self, x: &Q) -> bool {
        match self {
            ExtendedReal::Finite(v) => x <= v,
            ExtendedReal::PosInfinity => true,
        }
    }

    /// `x < self`; always true when `self` is `+∞`.
    pub fn gt_q(&self, x: &Q) -> bool {
        match self {
            ExtendedReal::Finite(v) => x < v,
            ExtendedReal::PosInfinity => true,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => to_f64(v),
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => f.write_str(&format_rational(v)),
            ExtendedReal::PosInfinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(ExtendedReal::PosInfinity);
        }
        parse_rational(&s)
            .map(ExtendedReal::Finite)
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a [`Q`] as its `"n/d"` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Q>`.
pub mod serde_opt_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|v| parse_rational(&v).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub(crate) fn min_max<'a>(x: &'a Q, y: &'a Q) -> (&'a Q, &'a Q) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Strict membership in the open interval with endpoints `x`, `y` (in either order).
pub(crate) fn strictly_between(v: &Q, x: &Q, y: &Q) -> bool {
    let (lo, hi) = min_max(x, y);
    lo < v && v < hi
}

pub(crate) fn in_closed(v: &Q, x: &Q, y: &Q) -> bool {
    let (lo, hi) = min_max(x, y);
    lo <= v && v <= hi
}

pub(crate) fn one() -> Q {
    Q::one()
}
