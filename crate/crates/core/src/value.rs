//! Exact rational numbers for history values and transition weights.
//!
//! Dominance is an order-theoretic notion, so values are compared exactly.
//! Text forms accepted: integers (`3`, `-2`), decimals (`2.5`, `-0.125`) and
//! fractions (`1/3`). Values whose denominator only has factors 2 and 5 print
//! as decimals; everything else prints as a fraction.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(Rational64);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid number `{0}`")]
pub struct ParseValueError(pub String);

impl Value {
    pub fn new(numer: i64, denom: i64) -> Self {
        Value(Rational64::new(numer, denom))
    }

    pub fn int(v: i64) -> Self {
        Value(Rational64::from_integer(v))
    }

    pub fn zero() -> Self {
        Value(Rational64::zero())
    }

    pub fn as_ratio(&self) -> Rational64 {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::int(v)
    }
}

impl FromStr for Value {
    type Err = ParseValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseValueError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Value(Rational64::new(n, d)));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let digits_ok = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if !digits_ok(int_part) || !digits_ok(frac_part) || frac_part.len() > 18 {
            return Err(err());
        }
        let int: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let mut r = Rational64::from_integer(int);
        if !frac_part.is_empty() {
            let denom = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(err)?;
            let num: i64 = frac_part.parse().map_err(|_| err())?;
            r += Rational64::new(num, denom);
        }
        Ok(Value(if neg { -r } else { r }))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        if r.is_integer() {
            return write!(f, "{}", r.numer());
        }
        let mut d = *r.denom();
        let (mut twos, mut fives) = (0u32, 0u32);
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return write!(f, "{}/{}", r.numer(), r.denom());
        }
        let places = twos.max(fives);
        let scale = 10i128.pow(places);
        let scaled = *r.numer() as i128 * scale / *r.denom() as i128;
        let sign = if r.is_negative() { "-" } else { "" };
        let abs = scaled.abs();
        let int = abs / scale;
        let frac = abs % scale;
        write!(f, "{sign}{int}.{frac:0width$}", width = places as usize)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Value;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a decimal string or a number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Value, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Value, E> {
                Ok(Value::int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Value, E> {
                i64::try_from(v).map(Value::int).map_err(E::custom)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Value, E> {
                // Route through the shortest decimal representation.
                v.to_string().parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}
