//! Exact field values.
//!
//! All levels are rationals. Decimal input such as `0.125` is read as the
//! exact fraction `1/8`, never through a float, so equality of levels is
//! decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// An exact rational level.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not an exact number: {0:?}")]
pub struct ValueParseError(pub String);

impl Value {
    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Value(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Value(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Representative in the half-open unit interval `[0, 1)`.
    pub fn frac(&self) -> Value {
        Value(&self.0 - self.0.floor())
    }

    /// Signed difference `other - self` on the circle `R/Z`, reduced into
    /// `(-1/2, 1/2]`.
    pub fn circle_delta(&self, other: &Value) -> Value {
        let mut d = (&other.0 - &self.0) - (&other.0 - &self.0).floor();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if d > half {
            d -= BigRational::one();
        }
        Value(d)
    }

    pub fn add(&self, other: &Value) -> Value {
        Value(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Value) -> Value {
        Value(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &Value) -> Value {
        Value(&self.0 * &other.0)
    }

    pub fn half(&self) -> Value {
        Value(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }

    /// Nearest `f64`, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        let n: f64 = self.0.numer().to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = self.0.denom().to_string().parse().unwrap_or(f64::NAN);
        n / d
    }

    pub fn cmp_value(&self, other: &Value) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::from_int(n)
    }
}

impl FromStr for Value {
    type Err = ValueParseError;

    /// Accepts integers, decimals (`-1.25`, `3e-2`) and fractions (`p/q`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ValueParseError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Value(BigRational::new(p, q)));
        }
        let (mantissa, exponent) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = t[i + 1..].parse().map_err(|_| err())?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (negative, digits) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let all: String = format!("{int_part}{frac_part}");
        let mut numer: BigInt = all.parse().map_err(|_| err())?;
        if negative {
            numer = -numer;
        }
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let r = if scale >= 0 {
            BigRational::from_integer(numer * num::pow(ten, scale as usize))
        } else {
            BigRational::new(numer, num::pow(ten, (-scale) as usize))
        };
        Ok(Value(r))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        let v: Value = "0.125".parse().unwrap();
        assert_eq!(v, Value::ratio(1, 8));
        let v: Value = "-2.5e-1".parse().unwrap();
        assert_eq!(v, Value::ratio(-1, 4));
        let v: Value = "1/3".parse().unwrap();
        assert_eq!(v, Value::ratio(1, 3));
        assert_eq!("7".parse::<Value>().unwrap(), Value::from_int(7));
        assert_eq!(".5".parse::<Value>().unwrap(), Value::ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", "e5", "."] {
            assert!(s.parse::<Value>().is_err(), "{s}");
        }
    }

    #[test]
    fn circle_delta_is_minimal() {
        let a = Value::ratio(9, 10);
        let b = Value::ratio(1, 10);
        assert_eq!(a.circle_delta(&b), Value::ratio(1, 5));
        assert_eq!(b.circle_delta(&a), Value::ratio(-1, 5));
        assert_eq!(Value::ratio(-1, 3).frac(), Value::ratio(2, 3));
    }
}
