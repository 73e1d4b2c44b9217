use crate::criteria::{construct_solution, EquationSpec, PolySolution, Scalar};
use crate::exactalg::{Rational, Ring};

use super::ApplicationError;

/// `x y'' - (2x^2 - 2(mu + 1)) y' - (2 mu + 3 - eps) x y = 0`.
///
/// A solution with `n` positive nodes has degree `N = 2n` in `x`.
pub fn davidson_spec(mu: &Scalar, eps: &Scalar) -> EquationSpec {
    let two = Scalar::from_int(2);
    EquationSpec::new(
        [Scalar::from_int(0), Scalar::from_int(0), Scalar::from_int(1), Scalar::from_int(0)],
        [-two.clone(), Scalar::from_int(0), &two * &(mu.clone() + &Scalar::from_int(1))],
        [&two * mu + &Scalar::from_int(3) - eps, Scalar::from_int(0)],
    )
    .expect("y'' coefficient is nonzero")
}

/// `2 mu + 3 + 4n`.
pub fn davidson_eigenvalue(mu: &Scalar, n: usize) -> Scalar {
    mu.scale(&Rational::from_int(2)) + &Scalar::from_int(3 + 4 * n as i64)
}

/// The even polynomial of degree `2n` at the eigenvalue.
pub fn davidson_solution(mu: &Rational, n: usize) -> Result<PolySolution, ApplicationError> {
    let mu = Scalar::constant(mu.clone());
    let spec = davidson_spec(&mu, &davidson_eigenvalue(&mu, n));
    Ok(construct_solution(&spec, 2 * n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{degree_condition, delta_determinant};
    use crate::exactalg::rational::{rat, ratio};
    use crate::exactalg::UPoly;
    use num_traits::Zero;

    #[test]
    fn eigenvalues() {
        assert_eq!(davidson_eigenvalue(&Scalar::zero(), 0), Scalar::from_int(3));
        assert_eq!(davidson_eigenvalue(&Scalar::x(), 1), Scalar::from_ints(&[7, 2]));
        assert_eq!(davidson_eigenvalue(&Scalar::constant(ratio(1, 2)), 2), Scalar::from_int(12));
    }

    #[test]
    fn degree_condition_at_even_degree() {
        let mu = Scalar::x();
        for n in 0..4 {
            let spec = davidson_spec(&mu, &davidson_eigenvalue(&mu, n));
            assert!(degree_condition(&spec, 2 * n).is_zero());
        }
    }

    #[test]
    fn first_solutions_at_mu_zero() {
        assert_eq!(davidson_solution(&rat(0), 1).unwrap().poly(), &UPoly::from_ints(&[-3, 0, 2]));
        assert_eq!(davidson_solution(&rat(0), 2).unwrap().poly(), &UPoly::from_ints(&[15, 0, -20, 0, 4]));
    }

    #[test]
    fn odd_degree_is_excluded() {
        // eps set for N = 2n + 1: the determinant is a nonzero polynomial in mu
        let mu = Scalar::x();
        for n in 0..3usize {
            let eps = mu.scale(&rat(2)) + &Scalar::from_int(3 + 2 * (2 * n as i64 + 1));
            let spec = davidson_spec(&mu, &eps);
            assert!(degree_condition(&spec, 2 * n + 1).is_zero());
            let det = delta_determinant(&spec, 2 * n + 1);
            assert!(!det.is_zero());
            for mu in [rat(0), ratio(1, 2), rat(1), ratio(-1, 3), rat(7)] {
                assert!(!det.eval(&mu).is_zero());
            }
        }
    }
}
