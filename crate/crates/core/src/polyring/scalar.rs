//! Coefficient fields.
//!
//! Two coefficient fields are supported: exact rationals ([`Rational`]) and
//! binary64 floats. Generic code is written against the [`Coeff`] trait, so
//! mixing the two inside one polynomial or matrix is a type error. At the
//! dynamic boundary (JSON, CLI) values travel as the tagged [`Scalar`], whose
//! arithmetic rejects mismatched tags instead of converting.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient. Always normalized: lowest terms, positive
/// denominator.
pub type Rational = BigRational;

/// Coefficient tolerance for float-mode polynomial comparisons, relative to
/// the relevant coefficient scale.
pub const EPS_POLY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Exact,
    Float,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Exact => f.write_str("exact"),
            Tag::Float => f.write_str("float"),
        }
    }
}

/// A coefficient field usable by [`Polynomial`](super::Polynomial) and
/// [`Matrix`](super::Matrix).
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const TAG: Tag;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Zero test. Exact coefficients must be exactly zero; floats must be
    /// within `EPS_POLY * scale`.
    fn is_negligible(&self, scale: f64) -> bool;

    /// Pivot test used by elimination routines.
    fn is_pivot_zero(&self, tol: f64) -> bool;

    fn to_scalar(&self) -> Scalar;

    fn from_scalar(s: &Scalar) -> Result<Self>;
}

impl Coeff for Rational {
    const TAG: Tag = Tag::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn is_pivot_zero(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Exact(r) => Ok(r.clone()),
            Scalar::Float(_) => Err(Error::TagMismatch),
        }
    }
}

impl Coeff for f64 {
    const TAG: Tag = Tag::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_negligible(&self, scale: f64) -> bool {
        f64::abs(*self) <= EPS_POLY * scale
    }

    fn is_pivot_zero(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Float(x) => Ok(*x),
            Scalar::Exact(_) => Err(Error::TagMismatch),
        }
    }
}

/// Tagged scalar: exact rational or binary64 float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn tag(&self) -> Tag {
        match self {
            Scalar::Exact(_) => Tag::Exact,
            Scalar::Float(_) => Tag::Float,
        }
    }

    pub fn exact(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        Ok(Scalar::Exact(Rational::from_ratio(num, den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => Coeff::to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    fn zip(
        &self,
        other: &Scalar,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(exact(a, b))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(float(*a, *b))),
            _ => Err(Error::TagMismatch),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        self.zip(other, |a, b| a / b, |a, b| a / b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Parses `"a"`, `"a/b"` or a decimal/exponent float literal. Integer and
/// fraction forms yield exact values.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad numerator in {t:?}")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad denominator in {t:?}")))?;
        if den.is_zero() {
            return Err(Error::parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Scalar::Exact(Rational::new(num, den)));
    }
    if let Ok(i) = t.parse::<BigInt>() {
        return Ok(Scalar::Exact(Rational::from_integer(i)));
    }
    t.parse::<f64>()
        .map(Scalar::Float)
        .map_err(|_| Error::parse(format!("not a number: {t:?}")))
}
