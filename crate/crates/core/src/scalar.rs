//! Coefficient rings for linear combinations of diagrams and tensors.
//!
//! Everything downstream (diagram combinations, PBW elements, tensor series)
//! is generic over [`Scalar`]. The two rings actually used are arbitrary
//! precision rationals and truncated polynomials/Laurent series in `h`
//! ([`crate::hseries::HSeries`]).

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact rational scalar. Always stored reduced with positive denominator;
/// the canonical zero is `0/1`.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Commutative coefficient ring with exact arithmetic.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
{
    fn from_rational(r: &Rational) -> Self;

    /// Multiply by `h^k`. `None` when the ring has no `h` (rationals with
    /// `k != 0`).
    fn scale_h(&self, k: i64) -> Option<Self>;

    /// Exact multiplicative inverse, when the element is a unit.
    fn inverse(&self) -> Option<Self>;

    /// Deterministic JSON encoding (rationals as strings, exactness kept).
    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn scale_h(&self, k: i64) -> Option<Self> {
        if k == 0 {
            Some(self.clone())
        } else {
            None
        }
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}
