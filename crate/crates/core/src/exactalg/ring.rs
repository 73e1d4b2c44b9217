use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::AlgebraError;

/// Arbitrary-precision exact fraction. Always stored reduced with a positive
/// denominator; zero is `0/1`.
pub type Rational = BigRational;

/// Commutative ring with exact division where the quotient exists.
///
/// Implemented for [`Rational`] and for [`UPoly`](super::UPoly) over any ring,
/// so polynomials in several parameters are built by nesting.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_int(n: i64) -> Self;

    /// `self / rhs` when `rhs` divides `self` exactly.
    fn exact_div(&self, rhs: &Self) -> Result<Self, AlgebraError>;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

impl Ring for Rational {
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn exact_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            Err(AlgebraError::DivideByZero)
        } else {
            Ok(self / rhs)
        }
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational::one() / self)
        }
    }
}
