//! Numeric modes.
//!
//! Every lattice and ladder operation is generic over [`Scalar`]. Two
//! implementations exist: [`Exact`] (arbitrary precision rationals, no
//! rounding, zero tolerance) and `f64` (absolute tolerance [`FLOAT_EPS`] on
//! every comparison).

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Exact = BigRational;

/// Absolute tolerance used by float mode.
pub const FLOAT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Signed
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    /// Absolute comparison tolerance (zero in exact mode).
    fn tolerance() -> Self;

    fn from_usize(n: usize) -> Self;

    fn from_exact(value: &Exact) -> Self;

    fn to_f64(&self) -> f64;

    /// Parse `"p/q"`, an integer, or a decimal literal such as `"0.15"` or `"1e-3"`.
    fn parse(text: &str) -> Result<Self>;

    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(s) => Self::parse(s),
            // shortest round-trip text keeps user-typed decimals intact
            Value::Number(n) => Self::parse(&n.to_string()),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }

    fn le_tol(&self, other: &Self) -> bool {
        *self <= other.clone() + Self::tolerance()
    }

    fn lt_tol(&self, other: &Self) -> bool {
        self.clone() + Self::tolerance() < *other
    }

    fn eq_tol(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= Self::tolerance()
    }

    fn is_zero_tol(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn tolerance() -> Self {
        FLOAT_EPS
    }

    fn from_usize(n: usize) -> Self {
        n as f64
    }

    fn from_exact(value: &Exact) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains('/') {
            return parse_exact(text).map(|r| Self::from_exact(&r));
        }
        text.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Parse(format!("invalid number `{text}`")))
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
}

impl Scalar for Exact {
    const MODE: Mode = Mode::Exact;

    fn tolerance() -> Self {
        Exact::zero()
    }

    fn from_usize(n: usize) -> Self {
        Exact::from_integer(BigInt::from(n))
    }

    fn from_exact(value: &Exact) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse(text: &str) -> Result<Self> {
        parse_exact(text.trim())
    }

    fn to_json(&self) -> Value {
        Value::String(format_exact(self))
    }

    // exact comparisons need no clone-and-add
    fn le_tol(&self, other: &Self) -> bool {
        self <= other
    }

    fn lt_tol(&self, other: &Self) -> bool {
        self < other
    }

    fn eq_tol(&self, other: &Self) -> bool {
        self == other
    }

    fn is_zero_tol(&self) -> bool {
        self.is_zero()
    }
}

/// Render an exact scalar as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_exact(value: &Exact) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

fn parse_exact(text: &str) -> Result<Exact> {
    let bad = || Error::Parse(format!("invalid exact scalar `{text}`"));
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Exact::new(num, den));
    }
    parse_decimal(text).ok_or_else(bad)
}

fn parse_decimal(text: &str) -> Option<Exact> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Exact::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Exact::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Convenience constructor for exact literals in code and tests.
pub fn ratio(numer: i64, denom: i64) -> Exact {
    Exact::new(BigInt::from(numer), BigInt::from(denom))
}
