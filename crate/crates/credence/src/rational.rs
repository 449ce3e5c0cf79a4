//! Exact rational numbers used for all probabilities and weights.
//!
//! Values are always stored reduced with a positive denominator, so two
//! equal rationals compare equal structurally. Arithmetic never rounds and
//! never overflows (arbitrary-precision integers back the representation).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::{Error as _, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact fraction `num/den` with `den > 0` and `gcd(|num|, den) = 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("denominator must not be zero")]
    ZeroDenominator,
    #[error("invalid rational literal `{0}`, expected INT or INT/UINT")]
    Malformed(String),
}

impl Rational {
    /// Builds `num/den`, reducing and normalising the sign.
    ///
    /// Panics if `den == 0`; use [`Rational::checked_new`] on untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        Self::checked_new(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
    }

    pub fn checked_new(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
    ) -> Result<Self, RationalError> {
        let den = den.into();
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Self(BigRational::new(num.into(), den)))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True when the value lies in `[0, 1]`, the range of a probability.
    pub fn in_unit_interval(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, RationalError> {
        if rhs.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Nearest `f64`, for reports only; the exact path never rounds.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Self::integer(n)
    }
}

impl fmt::Display for Rational {
    /// Renders `num/den`, or just `num` when the value is an integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Parses `INT` or `INT/UINT`, the same literal form the scenario format uses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || RationalError::Malformed(s.to_string());
        match s.split_once('/') {
            None => {
                let num = parse_int(s).ok_or_else(malformed)?;
                Ok(Self::integer(num))
            }
            Some((num, den)) => {
                let num = parse_int(num).ok_or_else(malformed)?;
                let den = parse_uint(den).ok_or_else(malformed)?;
                Self::checked_new(num, den)
            }
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

fn parse_uint(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;
    /// Exact division. Panics on a zero divisor; see [`Rational::checked_div`].
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Serialize for Rational {
    /// Serialises as `{"num": int, "den": int, "decimal": float}`; the
    /// integers carry full precision, the decimal is a convenience.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let num =
            serde_json::Number::from_str(&self.numer().to_string()).map_err(S::Error::custom)?;
        let den =
            serde_json::Number::from_str(&self.denom().to_string()).map_err(S::Error::custom)?;
        let mut st = serializer.serialize_struct("Rational", 3)?;
        st.serialize_field("num", &num)?;
        st.serialize_field("den", &den)?;
        st.serialize_field("decimal", &self.to_f64())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            num: serde_json::Number,
            den: serde_json::Number,
            #[serde(default)]
            #[allow(dead_code)]
            decimal: Option<f64>,
        }
        let parts = Parts::deserialize(deserializer)?;
        let num = BigInt::from_str(&parts.num.to_string())
            .map_err(|e| D::Error::custom(format!("num: {e}")))?;
        let den = BigInt::from_str(&parts.den.to_string())
            .map_err(|e| D::Error::custom(format!("den: {e}")))?;
        Rational::checked_new(num, den).map_err(D::Error::custom)
    }
}
