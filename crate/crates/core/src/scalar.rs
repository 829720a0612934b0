//! Numeric abstractions shared by the geometric and algebraic layers.
//!
//! Geometry (realizations, cell complexes, Voronoi boards) is generic over
//! [`Scalar`], implemented for `f32`, `f64` and exact rationals. Ring
//! arithmetic is generic over [`Coefficient`], implemented for `i64`, `i128`
//! and `BigInt`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Ordered field element used for coordinates.
///
/// Floating point types compare with an absolute tolerance; exact types
/// report a zero tolerance and every comparison is exact.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// Absolute tolerance for "lies on" tests. Zero for exact types.
    fn tolerance() -> Self;

    /// Lossy conversion from a double. Exact types take the exact binary
    /// value of `x`.
    fn from_real(x: f64) -> Self;

    fn real(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_exact() -> bool {
        false
    }

    fn approx_zero(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).approx_zero()
    }

    /// `self <= other` up to tolerance.
    fn approx_le(&self, other: &Self) -> bool {
        self.clone() <= other.clone() + Self::tolerance()
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
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn real(&self) -> f64 {
        *self
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }
    fn from_real(x: f64) -> Self {
        x as f32
    }
    fn real(&self) -> f64 {
        *self as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        Self::zero()
    }
    fn from_real(x: f64) -> Self {
        BigRational::from_float(x).expect("finite coordinate")
    }
    fn real(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_exact() -> bool {
        true
    }
}

/// Exact integer coefficient ring for cohomology computations.
pub trait Coefficient:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn int(x: i64) -> Self {
        <Self as FromPrimitive>::from_i64(x).expect("coefficient in range")
    }

    /// Floor division (rounds toward negative infinity).
    fn floor_div(&self, other: &Self) -> Self {
        self.div_floor(other)
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl Coefficient for i64 {}
impl Coefficient for i128 {}
impl Coefficient for BigInt {}

pub(crate) fn factorial<C: Coefficient>(k: u32) -> C {
    (1..=k).fold(C::one(), |acc, i| acc * C::int(i as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn exact_rational_has_zero_tolerance() {
        let third = BigRational::from_ratio(1, 3);
        assert!(BigRational::is_exact());
        assert!(!(third.clone() - BigRational::from_ratio(333, 1000)).approx_zero());
        assert!((third.clone() * BigRational::from_ratio(3, 1) - BigRational::one()).approx_zero());
    }

    #[test]
    fn float_tolerance_absorbs_rounding() {
        let x = 0.1f64 + 0.2;
        assert!(x.approx_eq(&0.3));
        assert!(0.3f64.approx_le(&x));
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial::<i64>(0), 1);
        assert_eq!(factorial::<i64>(4), 24);
        assert_eq!(factorial::<BigInt>(5), BigInt::from(120));
    }
}
