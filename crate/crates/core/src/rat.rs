//! Exact rational scalars.
//!
//! Every distance, label and diameter in the crate is a [`Rat`]. Membership
//! tests such as `d(x, c) == diam B` must be exact, so there is no floating
//! point anywhere on the computational path.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An arbitrary-precision rational number, always stored in lowest terms
/// with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`, reduced. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Exact midpoint `(self + other) / 2`.
    pub fn midpoint(&self, other: &Rat) -> Rat {
        Rat((&self.0 + &other.0) / BigInt::from(2))
    }

    pub fn max_of<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_integer(n)
    }
}

impl Add for &Rat {
    type Output = Rat;

    fn add(self, rhs: &Rat) -> Rat {
        Rat(&self.0 + &rhs.0)
    }
}

impl Add for Rat {
    type Output = Rat;

    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `"p"`, `"p/q"` and finite decimals `"i.f"`, with an optional
    /// leading `-` on the numerator. Nothing else: no whitespace, no `+`,
    /// no exponents, no bare `".5"` or `"5."`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseRatError::Empty);
        }
        let syntax = || ParseRatError::Syntax(s.to_owned());
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };

        let value = if let Some((num, den)) = body.split_once('/') {
            if !is_digits(num) || !is_digits(den) {
                return Err(syntax());
            }
            let num: BigInt = num.parse().map_err(|_| syntax())?;
            let den: BigInt = den.parse().map_err(|_| syntax())?;
            if den.is_zero() {
                return Err(ParseRatError::ZeroDenominator(s.to_owned()));
            }
            BigRational::new(num, den)
        } else if let Some((int, frac)) = body.split_once('.') {
            if !is_digits(int) || !is_digits(frac) {
                return Err(syntax());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| syntax())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            BigRational::new(digits, scale)
        } else {
            if !is_digits(body) {
                return Err(syntax());
            }
            BigRational::from_integer(body.parse().map_err(|_| syntax())?)
        };

        Ok(Rat(if negative { -value } else { value }))
    }
}

impl fmt::Display for Rat {
    /// Lowest terms, `"p"` when the denominator is one and `"p/q"` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rat({self})")
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!("3".parse::<Rat>().unwrap(), Rat::from_integer(3));
        assert_eq!("3/2".parse::<Rat>().unwrap(), Rat::new(3, 2));
        assert_eq!("1.5".parse::<Rat>().unwrap(), Rat::new(3, 2));
        assert_eq!("6/4".parse::<Rat>().unwrap(), Rat::new(3, 2));
        assert_eq!("0.125".parse::<Rat>().unwrap(), Rat::new(1, 8));
        assert_eq!("-2".parse::<Rat>().unwrap(), Rat::from_integer(-2));
        assert_eq!("-0.5".parse::<Rat>().unwrap(), Rat::new(-1, 2));
        assert_eq!("000".parse::<Rat>().unwrap(), Rat::zero());
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in [
            "", "-", "1/", "/2", "1.", ".5", "1e3", " 1", "1 ", "+1", "1/-2", "0.(3)", "1..2", "1/2/3",
            "--1", "½", "1.2/3",
        ] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?} should not parse");
        }
        assert_eq!("1/0".parse::<Rat>(), Err(ParseRatError::ZeroDenominator("1/0".into())));
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!(Rat::new(11, 2).to_string(), "11/2");
        assert_eq!(Rat::new(-3, 6).to_string(), "-1/2");
        assert_eq!(Rat::zero().to_string(), "0");
    }

    #[test]
    fn midpoint_is_exact() {
        assert_eq!(Rat::from_integer(1).midpoint(&Rat::from_integer(2)), Rat::new(3, 2));
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rat::new(n, d);
            prop_assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
        }

        #[test]
        fn decimal_matches_fraction(int in 0u32..1000, frac in 0u32..1000) {
            let dec: Rat = format!("{int}.{frac:03}").parse().unwrap();
            let expected = Rat::new(i64::from(int) * 1000 + i64::from(frac), 1000);
            prop_assert_eq!(dec, expected);
        }
    }
}
