//! Arithmetic modes.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Two modes are
//! provided: [`Rational`] (exact, arbitrary precision) and `f64` (floating
//! point with a fixed strictness tolerance of [`FLOAT_TOLERANCE`]).
//!
//! Two kinds of sign test exist. [`Scalar::sign`] is tolerant: in float mode
//! anything within the tolerance of zero reports [`Sign::Zero`]. It is used for
//! feasibility checks where a near-zero value is a legitimate zero (a degenerate
//! LCP component, a coordinate sitting on a face). [`Scalar::strict_sign`] is
//! used where the answer decides a classification; in float mode a value within
//! the tolerance of zero is refused with [`Indeterminate`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Strictness tolerance for float-mode comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

/// A float-mode comparison fell within the strictness tolerance of zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Indeterminate {
    pub value: f64,
}

/// Which arithmetic mode a value or problem runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(value: i64) -> Self;
    /// `numer / denom`; panics when `denom == 0`.
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Tolerant sign (see module docs).
    fn sign(&self) -> Sign;
    /// Sign for decision-critical comparisons (see module docs).
    fn strict_sign(&self) -> Result<Sign, Indeterminate>;
    /// Whether the value is representable as a valid scalar of this mode
    /// (finite for floats).
    fn is_valid(&self) -> bool;

    fn is_exact() -> bool {
        Self::MODE == Mode::Exact
    }

    fn is_zero(&self) -> bool {
        self.sign().is_zero()
    }

    fn is_positive(&self) -> bool {
        self.sign().is_positive()
    }

    fn is_negative(&self) -> bool {
        self.sign().is_negative()
    }

    /// Tolerant equality: `self - other` has tolerant sign zero.
    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        Rational::from_integer(BigInt::from(1))
    }

    fn from_i64(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn sign(&self) -> Sign {
        if Zero::is_zero(self) {
            Sign::Zero
        } else if Signed::is_positive(self) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn strict_sign(&self) -> Result<Sign, Indeterminate> {
        Ok(Scalar::sign(self))
    }

    fn is_valid(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sign(&self) -> Sign {
        if f64::abs(*self) <= FLOAT_TOLERANCE {
            Sign::Zero
        } else if *self > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn strict_sign(&self) -> Result<Sign, Indeterminate> {
        match Scalar::sign(self) {
            Sign::Zero => Err(Indeterminate { value: *self }),
            s => Ok(s),
        }
    }

    fn is_valid(&self) -> bool {
        self.is_finite()
    }
}

/// Converts an exact rational to the float mode.
pub fn rational_to_f64(value: &Rational) -> f64 {
    Scalar::to_f64(value)
}

/// `a · b` for equal-length slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// The 1-norm `Σ|xᵢ|`.
pub fn norm1<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |acc, v| acc + v.abs())
}
