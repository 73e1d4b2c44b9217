//! Exact scalars, univariate polynomials over a ring, and the fraction-free
//! determinant kernel everything else is built on.

mod matrix;
mod poly;
pub mod rational;
mod ring;

use thiserror::Error;

pub use matrix::{bareiss_determinant, Matrix};
pub use poly::{Degree, UPoly};
pub(crate) use poly::RationalRepr;
pub use rational::{format_rational, parse_rational};
pub use ring::{Field, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivideByZero,
    #[error("divisor does not divide exactly")]
    NotDivisible,
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}

pub fn poly_add<R: Ring>(p: &UPoly<R>, q: &UPoly<R>) -> UPoly<R> {
    p + q
}

pub fn poly_mul<R: Ring>(p: &UPoly<R>, q: &UPoly<R>) -> UPoly<R> {
    p * q
}

pub fn poly_derivative<R: Ring>(p: &UPoly<R>) -> UPoly<R> {
    p.derivative()
}

pub fn poly_exact_div<R: Ring>(p: &UPoly<R>, q: &UPoly<R>) -> Result<UPoly<R>, AlgebraError> {
    p.exact_div(q)
}
