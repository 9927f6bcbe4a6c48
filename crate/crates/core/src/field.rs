//! The two scalar fields: exact rationals and double-precision complex numbers.
//!
//! Algorithms are generic over [`Field`]. Each field carries its own linear
//! algebra backend, so the same pipeline runs exactly on rational input and
//! with tolerances on floating input. There is no implicit conversion between
//! the fields; [`Field::to_complex`] is the one explicit (lossy) direction.

use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{exact, float, Matrix};

pub use num_complex::Complex64;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic is exact. Tolerances are ignored when it is.
    const EXACT: bool;

    fn from_i64(value: i64) -> Self;
    fn from_rational(value: &Rational) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Absolute value as a double.
    fn magnitude(&self) -> f64;
    fn conj(&self) -> Self;

    /// True when `self` should count as zero relative to `scale`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol * scale
        }
    }

    fn rank(m: &Matrix<Self>, tol: f64) -> usize;
    /// Basis of the right null space.
    fn kernel(m: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>>;
    /// Determinant of a square matrix.
    fn det(m: &Matrix<Self>) -> Self;
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_i64(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn rank(m: &Matrix<Self>, _tol: f64) -> usize {
        exact::rank(m)
    }

    fn kernel(m: &Matrix<Self>, _tol: f64) -> Vec<Vec<Self>> {
        exact::kernel(m)
    }

    fn det(m: &Matrix<Self>) -> Self {
        exact::determinant(m)
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn from_i64(value: i64) -> Self {
        Complex64::new(value as f64, 0.0)
    }

    fn from_rational(value: &Rational) -> Self {
        Complex64::new(rational_to_f64(value), 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn rank(m: &Matrix<Self>, tol: f64) -> usize {
        float::rank(m, tol)
    }

    fn kernel(m: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>> {
        float::kernel(m, tol)
    }

    fn det(m: &Matrix<Self>) -> Self {
        float::determinant(m)
    }
}

/// Nearest double; saturates to infinity for values outside the double range.
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `p/q` as a rational; panics on a zero denominator.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
