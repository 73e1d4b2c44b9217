//! Radial problem `-psi''/2 + k(k+1)/(2r^2) psi - Z/(r + beta) psi = E psi` in
//! `d` dimensions with `k = (2l + d - 3)/2`.
//!
//! With `psi = r^{k+1} e^{-alpha(r+beta)} f` and `E = -alpha^2/2`, `f` solves
//!
//! ```text
//! r(r + beta) f'' + (-2 alpha r^2 + 2(k + 1 - alpha beta) r + 2 beta (k + 1)) f'
//!     + ((2Z - 2 alpha (k + 1)) r - 2 alpha beta (k + 1)) f = 0
//! ```
//!
//! A degree-`n` solution needs `alpha = Z/(n + k + 1)` and a condition on
//! `t = alpha beta` alone.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::criteria::{build_criterion_matrix, construct_solution, EquationSpec, PolySolution, Scalar};
use crate::exactalg::{bareiss_determinant, Matrix, Rational, Ring, UPoly};
use crate::solve::{count_roots, find_real_roots, sturm_chain, SolveError};

use super::ApplicationError;

type Poly = UPoly<Rational>;
type KPoly = UPoly<Poly>;

#[derive(Clone, Debug, PartialEq)]
pub enum CoulombShift {
    /// A fixed `beta > 0`.
    Value(Rational),
    /// `t = alpha beta` left as the unknown.
    UnknownProduct,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoulombProblem {
    charge: Rational,
    shift: CoulombShift,
    dimension: u32,
    angular: u32,
}

impl CoulombProblem {
    pub fn new(charge: Rational, shift: CoulombShift, dimension: u32, angular: u32) -> Result<Self, ApplicationError> {
        if dimension < 2 {
            return Err(ApplicationError::InvalidDimension(dimension));
        }
        if let CoulombShift::Value(b) = &shift {
            if !b.is_positive() {
                return Err(ApplicationError::NonPositiveShift);
            }
        }
        Ok(CoulombProblem {
            charge,
            shift,
            dimension,
            angular,
        })
    }

    pub fn charge(&self) -> &Rational {
        &self.charge
    }

    pub fn shift(&self) -> &CoulombShift {
        &self.shift
    }

    /// `(2l + d - 3)/2`.
    pub fn k(&self) -> Rational {
        Rational::new((2 * self.angular as i64 + self.dimension as i64 - 3).into(), 2.into())
    }

    /// `Z/(n + k + 1)`.
    pub fn alpha(&self, n: usize) -> Rational {
        &self.charge / (Rational::from_int(n as i64 + 1) + self.k())
    }

    pub fn with_shift(&self, shift: CoulombShift) -> Result<Self, ApplicationError> {
        Self::new(self.charge.clone(), shift, self.dimension, self.angular)
    }
}

/// Coefficients of the `f` equation over any ring.
pub fn coulomb_coefficients<R: Ring>(alpha: &R, beta: &R, k: &R, charge: &R) -> EquationSpec<R> {
    let two = R::from_int(2);
    let k1 = k.clone() + &R::one();
    let ab = alpha.clone() * beta;
    EquationSpec::new(
        [R::zero(), R::one(), beta.clone(), R::zero()],
        [
            -(two.clone() * alpha),
            two.clone() * &(k1.clone() - &ab),
            two.clone() * beta * &k1,
        ],
        [
            two.clone() * alpha * &k1 - &(two.clone() * charge),
            two * &ab * &k1,
        ],
    )
    .expect("y'' coefficient is nonzero")
}

/// The equation at `alpha = Z/(n + k + 1)`. With an unknown product the
/// coefficients are linear in `t = alpha beta`.
pub fn coulomb_spec(p: &CoulombProblem, n: usize) -> Result<EquationSpec, ApplicationError> {
    let alpha = p.alpha(n);
    if alpha.is_zero() {
        return Err(ApplicationError::DegenerateParameters("charge must be nonzero"));
    }
    let c = Scalar::constant;
    let (beta, name) = match &p.shift {
        CoulombShift::Value(b) => (c(b.clone()), "t"),
        CoulombShift::UnknownProduct => (Scalar::linear(Rational::zero(), Rational::one() / &alpha), "t"),
    };
    Ok(coulomb_coefficients(&c(alpha), &beta, &c(p.k()), &c(p.charge.clone())).with_unknown(name))
}

/// `-Z^2 / (2 (n + k + 1)^2)`.
pub fn coulomb_energy(p: &CoulombProblem, n: usize) -> Rational {
    let s = Rational::from_int(n as i64 + 1) + p.k();
    -(&p.charge * &p.charge) / (Rational::from_int(2) * &s * &s)
}

/// The tridiagonal condition in `Q[k][t]` (outer variable `t`), with the
/// off-diagonal pairs rescaled so only `t = alpha beta` appears.
fn scaled_matrix(n: usize) -> Matrix<KPoly> {
    let k = || KPoly::constant(Poly::x());
    let t = || KPoly::x();
    let int = |v: i64| KPoly::from_int(v);
    let mut m = Matrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let ji = j as i64;
        // 2t(k + j + 1) - j(j + 2k + 1)
        let diag = int(2) * &t() * &(k() + &int(ji + 1)) - &(int(ji) * &(int(ji + 1) + &(int(2) * &k())));
        m.set(j, j, diag);
        if j >= 1 {
            m.set(j, j - 1, int(2) * &t() * &int(ji - n as i64 - 1));
        }
        if j < n {
            m.set(j, j + 1, -(int(ji + 1) * &(int(ji + 2) + &(int(2) * &k()))));
        }
    }
    m
}

/// Removes powers of `t`, divides by the content in `k`, and makes the
/// leading coefficient of the leading coefficient one.
pub fn normalize_constraint(det: &KPoly) -> KPoly {
    if det.is_zero() {
        return KPoly::zero();
    }
    let low = det.lowest_order().expect("nonzero");
    let stripped = det.shift_down(low);
    let content = stripped.content();
    let divided = stripped.map(|c| c.div_rem(&content).expect("content divides").0);
    let lead = divided.leading().expect("nonzero").leading().expect("nonzero").clone();
    divided.map(|c| c.scale(&(Rational::one() / &lead)))
}

/// The degree-`n` condition on `t = alpha beta` with `k` symbolic.
pub fn coulomb_constraint_symbolic(n: usize) -> KPoly {
    normalize_constraint(&bareiss_determinant(&scaled_matrix(n)))
}

/// The degree-`n` condition on `t` at this problem's `k`, primitive.
pub fn coulomb_constraint(p: &CoulombProblem, n: usize) -> Poly {
    let k = p.k();
    let sym = bareiss_determinant(&scaled_matrix(n));
    let at_k = UPoly::new(sym.coeffs().iter().map(|c| c.eval(&k)).collect());
    match at_k.lowest_order() {
        Some(low) => at_k.shift_down(low).primitive(),
        None => Poly::zero(),
    }
}

/// A positive root `t*` of the constraint and what could be certified there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoulombRoot {
    pub t: f64,
    pub beta: f64,
    /// `t*` when it is rational.
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
    /// Forward-recurrence residual changes sign across the isolating interval.
    pub certified: bool,
    /// Exact solution, for rational roots only.
    pub solution: Option<PolySolution>,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&crate::exactalg::format_rational(r)),
        None => s.serialize_none(),
    }
}

/// Residual of the last matrix row after solving the others forward from
/// `c_0 = 1`; changes sign exactly where the determinant does for `t > 0`.
fn forward_residual(spec: &EquationSpec, n: usize, t: &Rational) -> Rational {
    let m = build_criterion_matrix(&spec.substitute(t), n).into_entries().map(|c| c.coeff(0));
    let mut c = vec![Rational::zero(); n + 1];
    c[0] = Rational::one();
    for row in 0..n {
        let mut acc = m.get(row, row).clone() * &c[row];
        if row >= 1 {
            acc += m.get(row, row - 1) * &c[row - 1];
        }
        c[row + 1] = -acc / m.get(row, row + 1);
    }
    let mut last = m.get(n, n) * &c[n];
    if n >= 1 {
        last += m.get(n, n - 1) * &c[n - 1];
    }
    last
}

/// Shrinks an isolating interval `(lo, hi]` with `hi > 0` until `lo > 0`.
fn positive_bracket(chain: &[Poly], iv: &(Rational, Rational)) -> (Rational, Rational) {
    let (mut lo, mut hi) = iv.clone();
    let two = Rational::from_int(2);
    while !lo.is_positive() {
        let mid = (&lo + &hi) / &two;
        if count_roots(chain, &mid, &hi) == 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Positive roots of the degree-`n` condition, certified by sign change and,
/// when rational, by an exact solution at `beta = t*/alpha`.
pub fn coulomb_roots(p: &CoulombProblem, n: usize, tolerance: f64) -> Result<Vec<CoulombRoot>, ApplicationError> {
    let constraint = coulomb_constraint(p, n);
    if constraint.is_zero() || constraint.coeffs().len() == 1 {
        return Ok(Vec::new());
    }
    let report = find_real_roots(&constraint, tolerance).map_err(|e: SolveError| {
        debug_assert!(false, "{e}");
        ApplicationError::DegenerateParameters("constraint has no isolable roots")
    })?;
    let chain = sturm_chain(&constraint).expect("nonzero constraint");
    let alpha = p.alpha(n);
    let symbolic = coulomb_spec(&p.with_shift(CoulombShift::UnknownProduct)?, n)?;
    let mut out = Vec::new();
    for (iv, &t) in report.intervals.iter().zip(&report.roots) {
        if !iv.0.is_positive() && !iv.1.is_positive() {
            continue;
        }
        if t <= 0.0 {
            continue;
        }
        let exact = report.exact.iter().find(|q| &iv.0 <= *q && *q <= &iv.1).cloned();
        let certified = match &exact {
            Some(q) => forward_residual(&symbolic, n, q).is_zero(),
            None => {
                let (lo, hi) = positive_bracket(&chain, iv);
                let (a, b) = (forward_residual(&symbolic, n, &lo), forward_residual(&symbolic, n, &hi));
                a.is_positive() != b.is_positive() && !a.is_zero() && !b.is_zero()
            }
        };
        let solution = match &exact {
            Some(q) => {
                let beta = q / &alpha;
                let spec = coulomb_spec(&p.with_shift(CoulombShift::Value(beta))?, n)?;
                construct_solution(&spec, n).ok()
            }
            None => None,
        };
        out.push(CoulombRoot {
            t,
            beta: t / crate::exactalg::rational::to_f64(&alpha),
            exact,
            certified,
            solution,
        });
    }
    Ok(out)
}
