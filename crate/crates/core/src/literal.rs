//! Numeric literals in problem documents.
//!
//! Reals may be JSON numbers or strings such as `"pi"`, `"pi/2"`, `"2pi"`,
//! `"-3pi/4"` or `"-3/5"`. Complex values may additionally be `[re, im]` pairs.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::C64;

/// Parses a real literal; `None` if malformed.
pub fn parse_real(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s.as_str(), None),
    };
    let mut value = parse_pi_multiple(num)?;
    if let Some(d) = den {
        let d = parse_pi_multiple(d)?;
        if d == 0.0 {
            return None;
        }
        value /= d;
    }
    value.is_finite().then_some(value)
}

fn parse_pi_multiple(s: &str) -> Option<f64> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let lower = body.to_ascii_lowercase();
    let value = if let Some(prefix) = lower.strip_suffix("pi") {
        let prefix = prefix.strip_suffix('*').unwrap_or(prefix);
        let factor = if prefix.is_empty() {
            1.0
        } else {
            prefix.parse::<f64>().ok()?
        };
        factor * std::f64::consts::PI
    } else {
        lower.parse::<f64>().ok()?
    };
    Some(sign * value)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawReal {
    Number(f64),
    Text(String),
}

impl RawReal {
    fn resolve<E: de::Error>(self) -> Result<f64, E> {
        match self {
            RawReal::Number(x) => Ok(x),
            RawReal::Text(s) => {
                parse_real(&s).ok_or_else(|| E::custom(format!("malformed real literal `{s}`")))
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Pair([RawReal; 2]),
    Real(RawReal),
}

pub fn de_real<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    RawReal::deserialize(d)?.resolve()
}

pub fn de_reals<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    Vec::<RawReal>::deserialize(d)?
        .into_iter()
        .map(RawReal::resolve)
        .collect()
}

pub fn de_complex<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
    complex_from_raw(RawComplex::deserialize(d)?)
}

fn complex_from_raw<E: de::Error>(raw: RawComplex) -> Result<C64, E> {
    match raw {
        RawComplex::Real(r) => Ok(C64::new(r.resolve()?, 0.0)),
        RawComplex::Pair([re, im]) => Ok(C64::new(re.resolve()?, im.resolve()?)),
    }
}

/// A complex number that serializes as `[re, im]` and deserializes from any
/// accepted literal form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex(pub C64);

impl Serialize for Complex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        complex_from_raw(RawComplex::deserialize(d)?).map(Complex)
    }
}

/// A real that deserializes from numbers or π strings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Real(pub f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RawReal::deserialize(d)?.resolve().map(Real)
    }
}
