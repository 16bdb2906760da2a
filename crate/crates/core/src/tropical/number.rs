use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// An element of 𝕋 = ℝ ∪ {−∞} with ⊕ = max and ⊗ = +.
///
/// `+` on this type is tropical addition and `*` is tropical
/// multiplication.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TropicalNumber(f64);

impl TropicalNumber {
    /// The ⊕-identity −∞.
    pub const ZERO: TropicalNumber = TropicalNumber(f64::NEG_INFINITY);
    /// The ⊗-identity 0.
    pub const ONE: TropicalNumber = TropicalNumber(0.0);

    /// Wraps a real number or −∞. NaN and +∞ are rejected.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value == f64::INFINITY {
            return Err(Error::InvalidParameter(format!("{value} is not in ℝ ∪ {{−∞}}")));
        }
        Ok(TropicalNumber(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Tropical power a^{⊗k} = k·a.
    pub fn pow(self, k: u32) -> Self {
        if k == 0 {
            Self::ONE
        } else {
            TropicalNumber(self.0 * f64::from(k))
        }
    }
}

impl Add for TropicalNumber {
    type Output = TropicalNumber;
    fn add(self, rhs: TropicalNumber) -> TropicalNumber {
        TropicalNumber(self.0.max(rhs.0))
    }
}

impl Mul for TropicalNumber {
    type Output = TropicalNumber;
    fn mul(self, rhs: TropicalNumber) -> TropicalNumber {
        if self.is_zero() || rhs.is_zero() {
            Self::ZERO
        } else {
            TropicalNumber(self.0 + rhs.0)
        }
    }
}

impl std::iter::Sum for TropicalNumber {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl std::iter::Product for TropicalNumber {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |a, b| a * b)
    }
}

impl PartialOrd for TropicalNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for TropicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// The dequantized sum h·ln Σ exp(vᵢ/h), computed by shifting by the
/// maximum. Satisfies max(v) ≤ result ≤ max(v) + h·ln k.
pub fn dequantized_sum(values: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
    }
    if values.is_empty() {
        return Err(Error::InvalidParameter("dequantized sum of no values".into()));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("NaN in dequantized sum".into()));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Ok(max);
    }
    let s: f64 = values.iter().map(|v| ((v - max) / h).exp()).sum();
    Ok(max + h * s.ln())
}
