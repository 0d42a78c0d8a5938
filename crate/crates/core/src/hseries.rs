//! Truncated polynomials and Laurent windows in the formal variable `h`.
//!
//! All arithmetic is exact modulo `h^order`. Binary operations truncate to
//! the smaller order of the two operands. Pure constants (including the ring
//! zero and one) carry an unbounded window so they never tighten a
//! truncation. Negative valuations model the localized props and are only
//! reachable through the `laurent` constructors or internal `scale_h` calls;
//! the plain constructors reject them.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Default truncation order for `h`-arithmetic.
pub const DEFAULT_ORDER: i64 = 8;

/// Window used by exact constants.
const UNBOUNDED: i64 = i64::MAX;

/// Truncated series `sum coeffs[i] * h^(val+i)`, exact mod `h^order`.
///
/// Canonical zero has empty coefficients and valuation 0. A nonzero series
/// has nonzero first and last stored coefficients. Equality compares the
/// stored coefficient data; the truncation order is precision metadata.
#[derive(Debug, Clone)]
pub struct HSeries<T: Scalar = Rational> {
    val: i64,
    coeffs: Vec<T>,
    order: i64,
}

impl<T: Scalar> PartialEq for HSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.val == other.val && self.coeffs == other.coeffs
    }
}

impl<T: Scalar> HSeries<T> {
    fn canonicalize(mut self) -> Self {
        while let Some(c) = self.coeffs.last() {
            if c.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.val = 0;
        }
        self
    }

    /// Series with the given valuation and coefficients, truncated at `order`.
    /// Rejects negative valuations; use [`HSeries::laurent`] for those.
    pub fn new(val: i64, coeffs: Vec<T>, order: i64) -> Result<Self> {
        if val < 0 && coeffs.iter().any(|c| !c.is_zero()) {
            return Err(Error::NegativeValuation(format!("valuation {val}")));
        }
        Ok(Self::laurent(val, coeffs, order))
    }

    /// Laurent constructor: negative valuations allowed (localized mode).
    pub fn laurent(val: i64, coeffs: Vec<T>, order: i64) -> Self {
        let mut s = Self { val, coeffs, order };
        if s.val < s.order {
            let window = usize::try_from(s.order.saturating_sub(s.val)).unwrap_or(usize::MAX);
            if window < s.coeffs.len() {
                s.coeffs.truncate(window);
            }
        } else {
            s.coeffs.clear();
        }
        s.canonicalize()
    }

    pub fn constant(c: T) -> Self {
        Self {
            val: 0,
            coeffs: vec![c],
            order: UNBOUNDED,
        }
        .canonicalize()
    }

    /// `c * h^k` with `k >= 0`.
    pub fn monomial(c: T, k: i64, order: i64) -> Result<Self> {
        Self::new(k, vec![c], order)
    }

    pub fn zero_at(order: i64) -> Self {
        Self {
            val: 0,
            coeffs: vec![],
            order,
        }
    }

    pub fn one_at(order: i64) -> Self {
        Self {
            val: 0,
            coeffs: vec![T::one()],
            order,
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn coeff_at(&self, exp: i64) -> T {
        if exp < self.val {
            return T::zero();
        }
        let i = (exp - self.val) as usize;
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Exponent/coefficient pairs of the stored (nonzero) window.
    pub fn iter_terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    pub fn map_coeffs<F: Fn(&T) -> T>(&self, f: F) -> Self {
        Self {
            val: self.val,
            coeffs: self.coeffs.iter().map(f).collect(),
            order: self.order,
        }
        .canonicalize()
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    /// Shift by `h^k` (Laurent shift, internal localization).
    pub fn shift(&self, k: i64) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        Self::laurent(self.val + k, self.coeffs.clone(), self.order)
    }

    /// Tighten the truncation window.
    pub fn retruncate(&self, order: i64) -> Self {
        Self::laurent(self.val, self.coeffs.clone(), order.min(self.order))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() {
            return Self::laurent(other.val, other.coeffs.clone(), order);
        }
        if other.coeffs.is_empty() {
            return Self::laurent(self.val, self.coeffs.clone(), order);
        }
        let val = self.val.min(other.val);
        let hi = (self.val + self.coeffs.len() as i64).max(other.val + other.coeffs.len() as i64);
        let mut coeffs = Vec::with_capacity((hi - val) as usize);
        for e in val..hi {
            let mut c = self.coeff_at(e);
            c += other.coeff_at(e);
            coeffs.push(c);
        }
        Self::laurent(val, coeffs, order)
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero_at(order);
        }
        let val = self.val + other.val;
        if val >= order {
            return Self::zero_at(order);
        }
        let window = usize::try_from(order.saturating_sub(val))
            .unwrap_or(usize::MAX)
            .min(self.coeffs.len() + other.coeffs.len() - 1);
        let mut coeffs = vec![T::zero(); window];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= window {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= window {
                    break;
                }
                coeffs[i + j] += a.clone() * b.clone();
            }
        }
        Self::laurent(val, coeffs, order)
    }

    /// Inverse of a unit series: valuation 0 with invertible constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        if self.coeffs.is_empty() || self.val != 0 {
            return Err(Error::NonUnit(format!("valuation {:?}", self.valuation())));
        }
        let c0 = self.coeffs[0]
            .inverse()
            .ok_or_else(|| Error::NonUnit("constant term not invertible".into()))?;
        if self.order == UNBOUNDED && self.coeffs.len() > 1 {
            return Err(Error::NonUnit(
                "cannot invert a non-constant series with unbounded window".into(),
            ));
        }
        let window = if self.order == UNBOUNDED {
            1
        } else {
            self.order as usize
        };
        let mut inv = vec![T::zero(); window];
        inv[0] = c0.clone();
        for n in 1..window {
            let mut acc = T::zero();
            for k in 1..=n {
                let a = self.coeff_at(k as i64);
                if a.is_zero() {
                    continue;
                }
                acc += a * inv[n - k].clone();
            }
            inv[n] = (T::zero() - acc) * c0.clone();
        }
        Ok(Self::laurent(0, inv, self.order))
    }

    /// Equality of coefficients up to (strictly below) `h^k`.
    pub fn eq_mod(&self, other: &Self, k: i64) -> bool {
        let lo = match (self.valuation(), other.valuation()) {
            (None, None) => return true,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        (lo..k).all(|e| self.coeff_at(e) == other.coeff_at(e))
    }
}

impl HSeries<Rational> {
    /// `h^k` at the given order, `k >= 0`.
    pub fn h_pow(k: i64, order: i64) -> Result<Self> {
        Self::monomial(Rational::one(), k, order)
    }
}

/// Product of two series (exact mod the smaller order).
pub fn hseries_mul<T: Scalar>(a: &HSeries<T>, b: &HSeries<T>) -> HSeries<T> {
    a.mul_ref(b)
}

/// Inverse of a unit series.
pub fn hseries_invert_unit<T: Scalar>(a: &HSeries<T>) -> Result<HSeries<T>> {
    a.invert_unit()
}

impl<T: Scalar> Add for HSeries<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<T: Scalar> AddAssign for HSeries<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = self.add_ref(&rhs);
    }
}

impl<T: Scalar> Sub for HSeries<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&rhs.neg())
    }
}

impl<T: Scalar> Neg for HSeries<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map_coeffs(|c| T::zero() - c.clone())
    }
}

impl<T: Scalar> Mul for HSeries<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<T: Scalar> Zero for HSeries<T> {
    fn zero() -> Self {
        Self {
            val: 0,
            coeffs: vec![],
            order: UNBOUNDED,
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for HSeries<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Scalar> fmt::Display for HSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.iter_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})h")?,
                _ => write!(f, "({c})h^{e}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Scalar for HSeries<T> {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(T::from_rational(r))
    }

    fn scale_h(&self, k: i64) -> Option<Self> {
        Some(self.shift(k))
    }

    fn inverse(&self) -> Option<Self> {
        self.invert_unit().ok()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "val": self.val,
            "coeffs": self.coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}
