//! Exact rational numbers and the rate values built on them.
//!
//! Every index and indicator in the workbench is an exact quotient of small
//! integers, so all arithmetic runs on [`Rational`] and only display code
//! rounds. The dispersion rate is the one quantity that is not rational in
//! general (it is a ratio of standard deviations); [`RateValue`] carries it
//! as the square root of an exact rational so comparisons against 1 stay
//! exact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics when `denominator` is zero.
    pub fn new(numerator: i64, denominator: i64) -> Self {
        Rational(Ratio::new(numerator, denominator))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(Ratio::from_integer(value))
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `None` when dividing by zero.
    pub fn checked_div(self, rhs: Rational) -> Option<Rational> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    pub fn recip(self) -> Option<Rational> {
        Rational::ONE.checked_div(self)
    }

    /// Arithmetic mean; `None` for an empty input.
    pub fn mean<I>(values: I) -> Option<Rational>
    where
        I: IntoIterator<Item = Rational>,
    {
        let mut count = 0i64;
        let mut total = Rational::ZERO;
        for value in values {
            count += 1;
            total = total + value;
        }
        (count > 0).then(|| total / Rational::from_integer(count))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `places` digits, rounding half away from zero.
    pub fn to_decimal_string(&self, places: u32) -> String {
        let scale = 10i128.pow(places);
        let numer = i128::from(self.numerator()) * scale;
        let denom = i128::from(self.denominator());
        let mut scaled = numer.abs() / denom;
        if (numer.abs() % denom) * 2 >= denom {
            scaled += 1;
        }
        let sign = if self.is_negative() && scaled != 0 { "-" } else { "" };
        if places == 0 {
            return format!("{sign}{scaled}");
        }
        let int_part = scaled / scale;
        let frac_part = scaled % scale;
        format!(
            "{sign}{int_part}.{frac_part:0width$}",
            width = places as usize
        )
    }

    /// The exact square root, when both terms are perfect squares.
    pub fn exact_sqrt(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let n = self.numerator();
        let d = self.denominator();
        let rn = n.sqrt();
        let rd = d.sqrt();
        (rn * rn == n && rd * rd == d).then(|| Rational::new(rn, rd))
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<u32> for Rational {
    fn from(value: u32) -> Self {
        Rational::from_integer(i64::from(value))
    }
}

impl From<usize> for Rational {
    fn from(value: usize) -> Self {
        Rational::from_integer(value as i64)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    /// Panics on division by zero; use [`Rational::checked_div`] otherwise.
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, Add::add)
    }
}

/// Renders `n/d`, or just `n` for integers. This is the persisted form.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {0:?}: expected an integer, `n/d`, or a decimal")]
pub struct ParseRationalError(String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `n/d`, integers, and finite decimals such as `0.4375`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let text = s.trim();
        if let Some((n, d)) = text.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Rational::new(n, d));
        }
        if let Some((int, frac)) = text.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
                return Err(err());
            }
            let negative = int.starts_with('-');
            let int_abs: i64 = match int.trim_start_matches(['-', '+']) {
                "" => 0,
                digits => digits.parse().map_err(|_| err())?,
            };
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| err())?;
            let magnitude = int_abs
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(err)?;
            let numer = if negative { -magnitude } else { magnitude };
            return Ok(Rational::new(numer, scale));
        }
        text.parse::<i64>().map(Rational::from_integer).map_err(|_| err())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The value of a quality indicator.
///
/// Every rate except dispersion is an exact rational. Dispersion is a ratio
/// of population standard deviations, i.e. `sqrt(var_c / var_d)`, which is
/// kept as the exact radicand unless it happens to be a perfect square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateValue {
    Exact(Rational),
    SquareRoot(Rational),
}

impl RateValue {
    /// `sqrt(radicand)`, collapsed to [`RateValue::Exact`] when possible.
    pub fn sqrt(radicand: Rational) -> RateValue {
        match radicand.exact_sqrt() {
            Some(root) => RateValue::Exact(root),
            None => RateValue::SquareRoot(radicand),
        }
    }

    /// The value squared, which is always rational.
    pub fn squared(&self) -> Rational {
        match *self {
            RateValue::Exact(r) => r * r,
            RateValue::SquareRoot(r) => r,
        }
    }

    pub fn as_exact(&self) -> Option<Rational> {
        match *self {
            RateValue::Exact(r) => Some(r),
            RateValue::SquareRoot(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            RateValue::Exact(r) => r.to_f64(),
            RateValue::SquareRoot(r) => r.to_f64().sqrt(),
        }
    }

    /// Exact comparison against 1. Both variants are non-negative in
    /// practice, so squaring preserves order.
    pub fn cmp_one(&self) -> Ordering {
        match *self {
            RateValue::Exact(r) => r.cmp(&Rational::ONE),
            RateValue::SquareRoot(r) => r.cmp(&Rational::ONE),
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            RateValue::Exact(r) | RateValue::SquareRoot(r) => r.is_zero(),
        }
    }

    pub fn recip(&self) -> Option<RateValue> {
        match *self {
            RateValue::Exact(r) => r.recip().map(RateValue::Exact),
            RateValue::SquareRoot(r) => r.recip().map(RateValue::sqrt),
        }
    }

    pub fn to_decimal_string(&self, places: u32) -> String {
        match *self {
            RateValue::Exact(r) => r.to_decimal_string(places),
            RateValue::SquareRoot(_) => format!("{:.*}", places as usize, self.to_f64()),
        }
    }
}

impl From<Rational> for RateValue {
    fn from(value: Rational) -> Self {
        RateValue::Exact(value)
    }
}

impl fmt::Display for RateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateValue::Exact(r) => write!(f, "{r}"),
            RateValue::SquareRoot(r) => write!(f, "sqrt({r})"),
        }
    }
}

impl FromStr for RateValue {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        match text.strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')')) {
            Some(inner) => Ok(RateValue::sqrt(inner.parse()?)),
            None => text.parse().map(RateValue::Exact),
        }
    }
}

impl Serialize for RateValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RateValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::ONE
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!("15/8".parse::<Rational>().unwrap(), Rational::new(15, 8));
        assert_eq!("30/16".parse::<Rational>().unwrap(), Rational::new(15, 8));
        assert_eq!("3".parse::<Rational>().unwrap(), Rational::from_integer(3));
        assert_eq!("0.4375".parse::<Rational>().unwrap(), Rational::new(7, 16));
        assert_eq!("-1.5".parse::<Rational>().unwrap(), Rational::new(-3, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_rendering_rounds_half_away_from_zero() {
        assert_eq!(Rational::new(15, 8).to_decimal_string(4), "1.8750");
        assert_eq!(Rational::new(31, 24).to_decimal_string(4), "1.2917");
        assert_eq!(Rational::new(9, 7).to_decimal_string(4), "1.2857");
        assert_eq!(Rational::new(1, 20000).to_decimal_string(4), "0.0001");
        assert_eq!(Rational::new(-1, 3).to_decimal_string(2), "-0.33");
        assert_eq!(Rational::from_integer(4).to_decimal_string(0), "4");
    }

    #[test]
    fn sqrt_collapses_perfect_squares() {
        assert_eq!(
            RateValue::sqrt(Rational::new(16, 25)),
            RateValue::Exact(Rational::new(4, 5))
        );
        assert_eq!(
            RateValue::sqrt(Rational::new(11, 25)),
            RateValue::SquareRoot(Rational::new(11, 25))
        );
        assert_eq!("sqrt(11/16)".parse::<RateValue>().unwrap().squared(), Rational::new(11, 16));
    }

    #[test]
    fn mean_of_empty_is_none() {
        assert_eq!(Rational::mean(Vec::new()), None);
        assert_eq!(
            Rational::mean([4, 2, 2, 4].map(Rational::from_integer)),
            Some(Rational::from_integer(3))
        );
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rational::new(n, d);
            prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
            let json = serde_json::to_string(&r).unwrap();
            prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
        }

        #[test]
        fn square_root_compares_against_one_exactly(n in 0i64..500, d in 1i64..500) {
            let v = RateValue::sqrt(Rational::new(n, d));
            prop_assert_eq!(v.cmp_one(), Rational::new(n, d).cmp(&Rational::ONE));
        }
    }
}
