//! Numeric genericity.
//!
//! Every solver, oracle and step rule that only needs field operations and an
//! ordering is written against [`Scalar`]. Two implementations ship with the
//! crate: `f64` and [`Rational`] (arbitrary-precision rationals). A run over
//! `Rational` performs no floating-point arithmetic on iterates, weights,
//! gradients or step sizes.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar backed by big integers.
pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_i64(value: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn abs(&self) -> Self;

    /// Lossy conversion used for reporting only.
    fn to_f64(&self) -> f64;

    /// Whether a convex-combination weight should be treated as zero.
    fn is_negligible_weight(&self) -> bool;

    fn from_usize(value: usize) -> Self {
        Self::from_i64(value as i64)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn clamp_to(self, lo: Self, hi: Self) -> Self {
        self.max_of(lo).min_of(hi)
    }

    /// +1 for non-negative values, −1 otherwise (`sign(0) = +1`).
    fn sign_nonneg(&self) -> Self {
        if *self >= Self::zero() {
            Self::one()
        } else {
            -Self::one()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible_weight(&self) -> bool {
        f64::abs(*self) <= 1e-15
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible_weight(&self) -> bool {
        self.is_zero()
    }
}

/// Inner product of two equally sized slices.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.clone() * y.clone();
    }
    acc
}

pub fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn sum<S: Scalar>(a: &[S]) -> S {
    let mut acc = S::zero();
    for x in a {
        acc += x.clone();
    }
    acc
}

/// Converts a slice of `f64` literals into any scalar type through exact
/// decimal-free ratios when the values are dyadic; intended for tests and
/// small fixtures.
pub fn from_f64_slice_exact(values: &[f64]) -> Vec<Rational> {
    values
        .iter()
        .map(|v| BigRational::from_float(*v).expect("finite value"))
        .collect()
}

/// Converts a slice of integers to scalars.
pub fn from_ints<S: Scalar>(values: &[i64]) -> Vec<S> {
    values.iter().map(|v| S::from_i64(*v)).collect()
}
