//! `x^2 (b(m+n) + a x^{l-1}) y'' - (m+n) a x^l y' - (m+n) m(m+1) b y = 0`.
//!
//! Polynomial solutions are `x^{m+1} 2F1(-n/(l-1), (m+1)/(l-1); (2m+l)/(l-1); z)`
//! with `z = -a x^{l-1} / (b(m+n))`, terminating when `(l-1) | n`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::criteria::{construct_solution, degree_condition, EquationSpec, PolySolution};
use crate::exactalg::{Rational, Ring, UPoly};

use super::ApplicationError;

type Poly = UPoly<Rational>;

#[derive(Clone, Debug, PartialEq)]
pub struct HyperSolution {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub a: Rational,
    pub b: Rational,
    /// The full solution including the `x^{m+1}` prefactor; degree `m + 1 + n`.
    pub poly: Poly,
}

fn r(v: usize) -> Rational {
    Rational::from_int(v as i64)
}

pub fn hyper_build(m: usize, n: usize, l: usize, a: &Rational, b: &Rational) -> Result<HyperSolution, ApplicationError> {
    if l < 2 {
        return Err(ApplicationError::DegenerateParameters("l must be at least 2"));
    }
    if b.is_zero() {
        return Err(ApplicationError::DegenerateParameters("b must be nonzero"));
    }
    if m + n == 0 {
        return Err(ApplicationError::DegenerateParameters("m + n must be positive"));
    }
    let step = l - 1;
    if !n.is_multiple_of(step) {
        return Err(ApplicationError::BadDegree { n, step });
    }
    let nu = n / step;
    let s = r(step);
    // 2F1(-nu, p; q; z) with p = (m+1)/(l-1), q = (2m+l)/(l-1)
    let p = r(m + 1) / &s;
    let q = r(2 * m + l) / &s;
    let z = -(a / (b * r(m + n)));
    let mut coeffs = vec![Rational::zero(); m + 2 + n];
    let mut term = Rational::one();
    coeffs[m + 1] = term.clone();
    for k in 0..nu {
        let kk = r(k);
        term = term * (&kk - r(nu)) * (&p + &kk) / ((&q + &kk) * (&kk + Rational::one())) * &z;
        coeffs[m + 1 + (k + 1) * step] = term.clone();
    }
    Ok(HyperSolution {
        m,
        n,
        l,
        a: a.clone(),
        b: b.clone(),
        poly: UPoly::new(coeffs),
    })
}

/// Residual of `y` in the cleared equation.
pub fn hyper_residual(m: usize, n: usize, l: usize, a: &Rational, b: &Rational, y: &Poly) -> Poly {
    let mn = r(m + n);
    let second = UPoly::monomial(b * &mn, 2) + UPoly::monomial(a.clone(), l + 1);
    let first = UPoly::monomial(&mn * a, l);
    let zeroth = UPoly::constant(&mn * r(m * (m + 1)) * b);
    let dy = y.derivative();
    &(&(&second * &dy.derivative()) - &(&first * &dy)) - &(&zeroth * y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HyperVerification {
    pub residual_is_zero: bool,
    /// For `l = 2`: the generic criteria reproduce the same polynomial.
    pub generic_path: Option<bool>,
}

impl HyperVerification {
    pub fn passed(self) -> bool {
        self.residual_is_zero && self.generic_path != Some(false)
    }
}

/// At `l = 2` the equation is the cubic-coefficient instance
/// `a3 = (a, b(m+n), 0, 0)`, `a2 = (-(m+n) a, 0, 0)`, `tau = (0, (m+n) m(m+1) b)`.
pub fn hyper_spec_l2(m: usize, n: usize, a: &Rational, b: &Rational) -> EquationSpec {
    let mn = r(m + n);
    let z = Rational::zero;
    EquationSpec::numeric(
        [a.clone(), b * &mn, z(), z()],
        [-(&mn * a), z(), z()],
        [z(), &mn * r(m * (m + 1)) * b],
    )
    .expect("y'' coefficient is nonzero")
}

fn generic_path(sol: &HyperSolution) -> bool {
    let spec = hyper_spec_l2(sol.m, sol.n, &sol.a, &sol.b);
    let degree = sol.m + sol.n + 1;
    if !degree_condition(&spec, degree).is_zero() {
        return false;
    }
    match construct_solution(&spec, degree) {
        Ok(found) => PolySolution::new(&sol.poly, true).is_some_and(|s| s.poly() == found.poly()),
        Err(_) => false,
    }
}

pub fn hyper_verify(sol: &HyperSolution) -> HyperVerification {
    HyperVerification {
        residual_is_zero: hyper_residual(sol.m, sol.n, sol.l, &sol.a, &sol.b, &sol.poly).is_zero(),
        generic_path: (sol.l == 2).then(|| generic_path(sol)),
    }
}
