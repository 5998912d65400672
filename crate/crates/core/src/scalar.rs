//! Scalar backends.
//!
//! All counting algorithms branch on exact comparisons with zero. In
//! floating point that decision is made against a relative tolerance; with
//! rational inputs it can be made exactly. Algorithms are therefore generic
//! over [`Scalar`], instantiated with `f64` or [`BigRational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Which backend a configuration runs on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarMode {
    /// IEEE-754 binary64 with relative zero tolerance `epsilon`.
    Float { epsilon: f64 },
    /// Exact arbitrary-precision rationals; branch decisions are exact.
    Rational,
}

impl ScalarMode {
    pub const DEFAULT_EPSILON: f64 = 1e-12;

    pub fn epsilon(&self) -> f64 {
        match self {
            ScalarMode::Float { epsilon } => *epsilon,
            ScalarMode::Rational => 0.0,
        }
    }
}

/// Zero test carried through the recurrences and factorizations.
///
/// In Float mode a value `v` counts as zero iff |v| <= eps * max(1, scale),
/// where `scale` is the magnitude of the configuration data
/// (max of |strength| and 1/gap). Exact backends ignore it.
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub eps: f64,
    pub scale: f64,
}

impl Tol {
    pub fn new(eps: f64, scale: f64) -> Self {
        Tol { eps, scale }
    }

    /// Tolerance object for exact arithmetic (never consulted).
    pub fn exact() -> Self {
        Tol { eps: 0.0, scale: 1.0 }
    }

    fn threshold(&self) -> f64 {
        self.eps * self.scale.max(1.0)
    }
}

/// Arithmetic interface required by the counting algorithms.
pub trait Scalar:
    Clone
    + PartialOrd
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when comparisons with zero are exact (no tolerance needed).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact image of an f64 (dyadic rational for the exact backend).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    /// Smallest integer >= self, as a scalar.
    fn ceil_int(&self) -> Self;

    /// Reciprocal; caller guarantees the value is nonzero.
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Branch decision "is this value zero" at the given tolerance.
    fn is_negligible(&self, tol: &Tol) -> bool {
        if Self::EXACT {
            *self == Self::zero()
        } else {
            self.to_f64().abs() <= tol.threshold()
        }
    }

    /// True when a pivot is suspiciously close to the branch threshold
    /// (within 10x of it) without being treated as zero.
    fn is_near_zero(&self, tol: &Tol) -> bool {
        if Self::EXACT {
            false
        } else {
            let v = self.to_f64().abs();
            v > tol.threshold() && v <= 10.0 * tol.threshold()
        }
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn is_positive_val(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn ceil_int(&self) -> Self {
        f64::ceil(*self)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn ceil_int(&self) -> Self {
        self.ceil()
    }
}

/// Parse a rational literal: either `p/q` or a decimal/integer literal.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let p: BigInt = num.trim().parse().ok()?;
        let q: BigInt = den.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else if let Ok(int) = text.parse::<BigInt>() {
        Some(BigRational::from_integer(int))
    } else {
        // decimal literal, e.g. "0.25"
        let v: f64 = text.parse().ok()?;
        if !v.is_finite() {
            return None;
        }
        <BigRational as FromPrimitive>::from_f64(v)
    }
}

/// Format a rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
