//! Polynomial-solution criteria for
//!
//! ```text
//! (a30 x^3 + a31 x^2 + a32 x + a33) y'' + (a20 x^2 + a21 x + a22) y' - (tau10 x + tau11) y = 0
//! ```
//!
//! A degree-`n` solution `y = sum c_k x^k` needs the leading balance
//! `tau10 = n(n-1) a30 + n a20` and a nonzero null vector of the banded
//! `(n+1) x (n+1)` matrix whose row `k` holds the four-term recurrence
//!
//! ```text
//! A_k c_{k-1} + B_k c_k + C_k c_{k+1} + D_k c_{k+2} = 0
//! A_k = tau10 - (k-2)(k-1) a30 - (k-1) a20     B_k = tau11 - k((k-1) a31 + a21)
//! C_k = -(k+1)(k a32 + a22)                     D_k = -(k+2)(k+1) a33
//! ```
//!
//! Coefficients are generic over [`Ring`]; the everyday instantiation is
//! [`Scalar`], a polynomial in a single unknown parameter `t`.

mod classical;
mod equation;
mod solution;

use thiserror::Error;

use crate::exactalg::{bareiss_determinant, Matrix, Rational, Ring, UPoly};

pub use classical::{
    classical_polynomials, classical_recurrence_step, classical_seed, classical_tau,
    ClassicalEquation,
};
pub use equation::{scalars_from_json, EquationSpec, NumericPolys};
pub use solution::{construct_solution, nullspace, residual, verify_solution, PolySolution};

/// Equation coefficient: a polynomial in the unknown parameter (constant when
/// the equation is fully numeric).
pub type Scalar = UPoly<Rational>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriteriaError {
    #[error("equation has no second- or first-derivative term")]
    NotSecondOrder,
    #[error("operation needs numeric coefficients but the equation has an unknown parameter")]
    Parametric,
    #[error("coefficient is not linear in the unknown parameter")]
    NonlinearUnknown,
    #[error("more than one unknown parameter: {0:?}")]
    MultipleUnknowns(Vec<String>),
    #[error("degree condition fails at n = {n} (value {value})")]
    DegreeConditionFails { n: usize, value: String },
    #[error("criterion matrix is nonsingular at n = {n}")]
    NoNullspace { n: usize },
    #[error("null space has dimension {}", basis.len())]
    AmbiguousNullspace { basis: Vec<PolySolution> },
    #[error("constructed polynomial leaves a nonzero residual")]
    ResidualNonzero,
    #[error("recurrence denominator vanishes at n = {n}")]
    DegenerateDenominator { n: usize },
    #[error("invalid equation JSON: {0}")]
    Json(String),
}

/// One row of the four-term recurrence: coefficients of `c_{k-1}`, `c_k`,
/// `c_{k+1}` and `c_{k+2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceRow<R> {
    pub sub: R,
    pub diag: R,
    pub sup1: R,
    pub sup2: R,
}

fn times<R: Ring>(c: i64, r: &R) -> R {
    R::from_int(c) * r
}

pub fn recurrence_row<R: Ring>(eq: &EquationSpec<R>, k: usize) -> RecurrenceRow<R> {
    let [a30, a31, a32, a33] = eq.a3();
    let [a20, a21, a22] = eq.a2();
    let [tau10, tau11] = eq.tau();
    let k = k as i64;
    RecurrenceRow {
        sub: tau10.clone() - &times((k - 2) * (k - 1), a30) - &times(k - 1, a20),
        diag: tau11.clone() - &times(k * (k - 1), a31) - &times(k, a21),
        sup1: -(times(k * (k + 1), a32) + &times(k + 1, a22)),
        sup2: -times((k + 2) * (k + 1), a33),
    }
}

/// `tau10 - n(n-1) a30 - n a20`; a degree-`n` solution needs this to vanish.
pub fn degree_condition<R: Ring>(eq: &EquationSpec<R>, n: usize) -> R {
    let [a30, _, _, _] = eq.a3();
    let [a20, _, _] = eq.a2();
    let [tau10, _] = eq.tau();
    let n = n as i64;
    tau10.clone() - &times(n * (n - 1), a30) - &times(n, a20)
}

/// Leading-balance test for the wider class whose coefficients have degrees
/// `k+2`, `k+1`, `k`: `tau_k0 = n(n-1) a_{k+2,0} + n a_{k+1,0}`. The balance
/// is the same for every `k`; `k` is accepted so callers state the class.
pub fn necessary_condition_general(
    second_lead: &Rational,
    first_lead: &Rational,
    tau_lead: &Rational,
    n: usize,
    _k: usize,
) -> bool {
    let n = n as i64;
    *tau_lead == times(n * (n - 1), second_lead) + &times(n, first_lead)
}

/// The `(n+1) x (n+1)` banded criterion matrix; row `k` is [`recurrence_row`]
/// truncated to columns `0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionMatrix<R> {
    n: usize,
    entries: Matrix<R>,
}

impl<R: Ring> CriterionMatrix<R> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &Matrix<R> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &R {
        self.entries.get(row, col)
    }

    pub fn into_entries(self) -> Matrix<R> {
        self.entries
    }
}

pub fn build_criterion_matrix<R: Ring>(eq: &EquationSpec<R>, n: usize) -> CriterionMatrix<R> {
    let mut m = Matrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        let row = recurrence_row(eq, k);
        if k >= 1 {
            m.set(k, k - 1, row.sub);
        }
        m.set(k, k, row.diag);
        if k < n {
            m.set(k, k + 1, row.sup1);
        }
        if k + 2 <= n {
            m.set(k, k + 2, row.sup2);
        }
    }
    // The dropped row n+1 reduces to (its sub-diagonal) * c_n = 0.
    assert_eq!(
        recurrence_row(eq, n + 1).sub,
        degree_condition(eq, n),
        "truncated row must reproduce the degree condition"
    );
    CriterionMatrix { n, entries: m }
}

/// Determinant of the criterion matrix, exact in the coefficient ring.
pub fn delta_determinant<R: Ring>(eq: &EquationSpec<R>, n: usize) -> R {
    bareiss_determinant(build_criterion_matrix(eq, n).entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};
    use num_traits::{One, Zero};

    fn s(v: i64) -> Scalar {
        Scalar::constant(rat(v))
    }

    fn t() -> Scalar {
        Scalar::x()
    }

    /// x^3 y'' + alpha (x^2 - 1) y' + (beta x + gamma) y = 0
    fn krylov(alpha: Scalar, beta: Scalar, gamma: Scalar) -> EquationSpec {
        EquationSpec::from_operator(
            [s(1), s(0), s(0), s(0)],
            [alpha.clone(), s(0), -alpha],
            [beta, gamma],
        )
        .unwrap()
    }

    #[test]
    fn degree_condition_krylov_robnik() {
        // alpha = 5/2, beta unknown: condition -t - n^2 - (alpha - 1) n
        let alpha = ratio(5, 2);
        let eq = krylov(Scalar::constant(alpha.clone()), t(), s(0));
        for n in 0..6usize {
            let c = degree_condition(&eq, n);
            let nn = rat(n as i64);
            let beta = -(&nn * &nn) - (&alpha - rat(1)) * &nn;
            assert_eq!(c.eval(&beta), rat(0), "n = {n}");
            assert_eq!(c.coeff(1), rat(-1));
        }
    }

    #[test]
    fn degree_condition_chhajlany() {
        // y'' + (p - 2x^2) y' + (delta x + alpha) y = 0 with delta unknown
        let eq = EquationSpec::from_operator(
            [s(0), s(0), s(0), s(1)],
            [s(-2), s(0), s(3)],
            [t(), s(1)],
        )
        .unwrap();
        for n in 0..6 {
            assert_eq!(degree_condition(&eq, n), Scalar::linear(rat(2 * n as i64), rat(-1)));
        }
    }

    #[test]
    fn degree_condition_at_zero_is_tau10() {
        let eq = krylov(s(3), t(), s(1));
        assert_eq!(degree_condition(&eq, 0), eq.tau()[0]);
    }

    #[test]
    fn necessary_condition_examples() {
        for n in 0..8usize {
            let tau = rat((n * (n + 1)) as i64);
            assert!(necessary_condition_general(&rat(1), &rat(2), &tau, n, 0));
            assert!(necessary_condition_general(&rat(1), &rat(2), &tau, n, 3));
        }
        assert!(!necessary_condition_general(&rat(1), &rat(2), &rat(5), 2, 0));
        assert!(necessary_condition_general(&ratio(7, 3), &rat(-4), &rat(0), 0, 1));
    }

    #[test]
    fn chhajlany_matrix_rows() {
        // delta, alpha and p are numeric here; rows follow the displayed pattern
        let (p, delta, alpha) = (rat(3), rat(8), rat(5));
        let eq = EquationSpec::from_operator(
            [s(0), s(0), s(0), s(1)],
            [s(-2), s(0), Scalar::constant(p.clone())],
            [Scalar::constant(delta.clone()), Scalar::constant(alpha.clone())],
        )
        .unwrap();
        let m = build_criterion_matrix(&eq, 4);
        let row = |i: usize| -> Vec<Rational> { (0..5).map(|j| m.get(i, j).coeff(0)).collect() };
        assert_eq!(row(0), vec![-alpha.clone(), -p.clone(), rat(-2), rat(0), rat(0)]);
        assert_eq!(
            row(1),
            vec![-delta.clone(), -alpha.clone(), -(rat(2) * &p), rat(-6), rat(0)]
        );
        assert_eq!(row(2)[1], -delta.clone() + rat(2));
    }

    #[test]
    fn krylov_two_by_two() {
        // n = 1, beta = -alpha, unknown gamma
        let alpha = rat(4);
        let a = Scalar::constant(alpha.clone());
        let eq = krylov(a.clone(), -a.clone(), t());
        let m = build_criterion_matrix(&eq, 1);
        assert_eq!(m.get(0, 0), &-t());
        assert_eq!(m.get(0, 1), &a);
        assert_eq!(m.get(1, 0), &a);
        assert_eq!(m.get(1, 1), &-t());
        assert_eq!(delta_determinant(&eq, 1), Scalar::from_ints(&[-16, 0, 1]));
    }

    #[test]
    fn krylov_three_by_three() {
        // n = 2, beta = -2(alpha + 1): det = -t (t^2 - 2 alpha (2 alpha + 3))
        let alpha = rat(3);
        let beta = rat(-8);
        let eq = krylov(
            Scalar::constant(alpha),
            Scalar::constant(beta),
            t(),
        );
        assert!(degree_condition(&eq, 2).is_zero());
        assert_eq!(delta_determinant(&eq, 2), Scalar::from_ints(&[0, 54, 0, -1]));
    }

    #[test]
    fn one_by_one_matrix() {
        let eq = krylov(s(2), s(-7), t());
        let m = build_criterion_matrix(&eq, 0);
        assert_eq!(m.entries().rows(), 1);
        assert_eq!(m.get(0, 0), &eq.tau()[1]);
    }

    #[test]
    fn davidson_odd_degree_determinant() {
        // x y'' - (2x^2 - 2(mu+1)) y' - tau10 x y with tau10 = -2 (N = 1); mu unknown
        let mu = t();
        let eq = EquationSpec::new(
            [s(0), s(0), s(1), s(0)],
            [s(-2), s(0), (mu + s(1)).scale(&rat(2))],
            [s(-2), s(0)],
        )
        .unwrap();
        assert!(degree_condition(&eq, 1).is_zero());
        assert_eq!(delta_determinant(&eq, 1), Scalar::from_ints(&[-4, -4]));
    }

    #[test]
    fn row_k_matches_general_table() {
        // Generic entries of the first three rows with all ten coefficients distinct.
        let eq = EquationSpec::new(
            [s(2), s(3), s(5), s(7)],
            [s(11), s(13), s(17)],
            [s(19), s(23)],
        )
        .unwrap();
        let m = build_criterion_matrix(&eq, 3);
        let g = |i, j| m.get(i, j).coeff(0);
        assert_eq!(g(0, 0), rat(23));
        assert_eq!(g(0, 1), rat(-17));
        assert_eq!(g(0, 2), rat(-2 * 7));
        assert_eq!(g(1, 0), rat(19));
        assert_eq!(g(1, 1), rat(23 - 13));
        assert_eq!(g(1, 2), rat(-2 * (5 + 17)));
        assert_eq!(g(1, 3), rat(-6 * 7));
        assert_eq!(g(2, 1), rat(19 - 11));
        assert_eq!(g(2, 2), rat(23 - 2 * (3 + 13)));
        assert_eq!(g(2, 3), rat(-3 * (2 * 5 + 17)));
        assert_eq!(g(3, 2), rat(19 - 2 * 2 - 2 * 11));
        assert_eq!(g(3, 3), rat(23 - 6 * 3 - 3 * 13));
        assert!(m.get(0, 3).is_zero() && m.get(3, 0).is_zero());
    }

    #[test]
    fn scaling_equation_scales_determinant() {
        let eq = krylov(s(2), s(-4), s(3));
        let scaled = eq.map(|c| c.scale(&rat(3)));
        let d = delta_determinant(&eq, 3);
        let ds = delta_determinant(&scaled, 3);
        assert_eq!(ds, d.scale(&rat(81)));
        assert!(!Scalar::one().is_zero());
    }
}
