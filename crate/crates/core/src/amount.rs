//! Exact money values.
//!
//! [`Amount`] is a nonnegative rational kept in lowest terms. Signed
//! quantities (corrections, conditional gains) use [`Rational`] directly.
//! Both serialize as `"num/den"` strings, or `"num"` when the denominator
//! is one.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational.
pub type Rational = BigRational;

/// Parses `"n"`, `"n/d"` or a plain decimal literal such as `"112.5"`.
///
/// Decimal literals are converted exactly (`"0.1"` is `1/10`).
pub fn parse_rational(input: &str) -> Result<Rational> {
    let err = |reason| Error::Parse { input: input.to_owned(), reason };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_int(num.trim()).ok_or_else(|| err("bad numerator"))?;
        let den = parse_int(den.trim()).ok_or_else(|| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int = int.strip_prefix(['-', '+']).unwrap_or(int);
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err("bad decimal literal"));
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| err("bad decimal literal"))?;
        let den = num_traits::pow(BigInt::from(10u8), frac.len());
        let value = Rational::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    parse_int(s)
        .map(Rational::from_integer)
        .ok_or_else(|| err("not a number"))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders `value` with exactly `places` fractional digits, rounding half
/// away from zero.
pub fn to_decimal_string(value: &Rational, places: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), places as usize);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let (whole, rem) = scaled.numer().div_rem(scaled.denom());
    let rounded = if rem * 2u8 >= *scaled.denom() { whole + 1u8 } else { whole };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded_is_zero(&int_part, &frac_part) { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places as usize)
}

fn rounded_is_zero(int_part: &BigInt, frac_part: &BigInt) -> bool {
    int_part.is_zero() && frac_part.is_zero()
}

/// Converts a finite `f64` to the rational it denotes exactly.
pub fn rational_from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Best `f64` approximation of a rational.
pub fn rational_to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn serialize_rational<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub(crate) fn deserialize_rational<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let raw = String::deserialize(d)?;
    parse_rational(&raw).map_err(de::Error::custom)
}

/// A nonnegative exact money value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Amount(Rational);

impl Amount {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidAmount(format!("{value} is negative")));
        }
        Ok(Self(value))
    }

    /// Like [`Amount::new`] but also rejects zero.
    pub fn positive(value: Rational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::InvalidAmount(format!("{value} is not strictly positive")));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(Rational::zero())
    }

    pub fn from_integer(value: u64) -> Self {
        Self(Rational::from_integer(value.into()))
    }

    pub fn from_ratio(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidAmount("zero denominator".into()));
        }
        Ok(Self(Rational::new(numer.into(), denom.into())))
    }

    /// Exact conversion of a finite, nonnegative float.
    pub fn from_f64(value: f64) -> Result<Self> {
        let exact = rational_from_f64(value)
            .ok_or_else(|| Error::InvalidAmount(format!("{value} is not finite")))?;
        Self::new(exact)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn double(&self) -> Self {
        Self(&self.0 * Rational::from_integer(2.into()))
    }

    pub fn half(&self) -> Self {
        Self(&self.0 / Rational::from_integer(2.into()))
    }

    /// Multiplies by a nonnegative rational factor.
    pub fn scale(&self, factor: &Rational) -> Result<Self> {
        Self::new(&self.0 * factor)
    }

    /// `3/2 · self`, the expected content of a fair pick from `{self, 2·self}`.
    pub fn three_halves(&self) -> Self {
        Self(&self.0 * Rational::new(3.into(), 2.into()))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }

    pub fn to_decimal_string(&self, places: u32) -> String {
        to_decimal_string(&self.0, places)
    }
}

impl Default for Amount {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Amount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Amount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}

impl Add for &Amount {
    type Output = Amount;

    fn add(self, rhs: &Amount) -> Amount {
        Amount(&self.0 + &rhs.0)
    }
}

impl Add for Amount {
    type Output = Amount;

    fn add(self, rhs: Amount) -> Amount {
        Amount(self.0 + rhs.0)
    }
}

impl From<Amount> for Rational {
    fn from(value: Amount) -> Self {
        value.0
    }
}

impl TryFrom<Rational> for Amount {
    type Error = Error;

    fn try_from(value: Rational) -> Result<Self> {
        Self::new(value)
    }
}

impl Serialize for Amount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_rational(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Amount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = deserialize_rational(d)?;
        Amount::new(value).map_err(de::Error::custom)
    }
}

/// `n/d` as a [`Rational`]; panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-1/3").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("112.5").unwrap(), ratio(225, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "a/b", "1.2.3", "1e5", "--1", "/3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn lowest_terms_and_display() {
        let a: Amount = "10/4".parse().unwrap();
        assert_eq!(a.numer(), &BigInt::from(5));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(a.to_string(), "5/2");
        assert_eq!(Amount::from_integer(0).to_string(), "0");
        assert_eq!(Amount::zero().denom(), &BigInt::from(1));
    }

    #[test]
    fn negative_amount_rejected() {
        assert!("-1".parse::<Amount>().is_err());
        assert!(Amount::positive(Rational::zero()).is_err());
    }

    #[test]
    fn decimal_rendering_rounds_half_away() {
        assert_eq!(to_decimal_string(&ratio(9, 4), 6), "2.250000");
        assert_eq!(to_decimal_string(&ratio(200, 3), 6), "66.666667");
        assert_eq!(to_decimal_string(&ratio(-2, 3), 2), "-0.67");
        assert_eq!(to_decimal_string(&ratio(1, 2), 0), "1");
        assert_eq!(to_decimal_string(&ratio(-1, 10_000_000), 6), "0.000000");
    }

    #[test]
    fn f64_conversion_is_exact() {
        let a = Amount::from_f64(0.1).unwrap();
        assert_eq!(a.to_f64(), 0.1);
        assert!(Amount::from_f64(f64::NAN).is_err());
        assert_eq!(Amount::from_f64(1.5).unwrap(), "3/2".parse().unwrap());
    }

    #[test]
    fn serde_uses_strings() {
        let a: Amount = "3/2".parse().unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "\"3/2\"");
        let back: Amount = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Amount>("\"-1\"").is_err());
    }
}
