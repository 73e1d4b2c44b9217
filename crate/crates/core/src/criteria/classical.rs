use num_traits::Zero;

use super::{CriteriaError, EquationSpec, Scalar};
use crate::exactalg::{Rational, Ring, UPoly};

/// `(a20 x^2 + a21 x + a22) y'' + (a10 x + a11) y' - tau00 y = 0`, whose
/// degree-`n` solutions exist for `tau00 = n(n-1) a20 + n a10`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalEquation {
    pub a20: Rational,
    pub a21: Rational,
    pub a22: Rational,
    pub a10: Rational,
    pub a11: Rational,
}

impl ClassicalEquation {
    pub fn from_ints(a20: i64, a21: i64, a22: i64, a10: i64, a11: i64) -> Self {
        let r = Rational::from_int;
        ClassicalEquation {
            a20: r(a20),
            a21: r(a21),
            a22: r(a22),
            a10: r(a10),
            a11: r(a11),
        }
    }

    /// The same equation as a cubic-coefficient instance with the given `tau00`.
    pub fn embed(&self, tau00: &Rational) -> EquationSpec<Scalar> {
        let z = Rational::zero;
        EquationSpec::numeric(
            [z(), self.a20.clone(), self.a21.clone(), self.a22.clone()],
            [z(), self.a10.clone(), self.a11.clone()],
            [z(), tau00.clone()],
        )
        .expect("classical equation has a y' or y'' term")
    }

    /// Embedding at the eigenvalue of degree `n`.
    pub fn embed_degree(&self, n: usize) -> Result<EquationSpec<Scalar>, CriteriaError> {
        if [&self.a20, &self.a21, &self.a22, &self.a10, &self.a11].iter().all(|c| c.is_zero()) {
            return Err(CriteriaError::NotSecondOrder);
        }
        Ok(self.embed(&classical_tau(&self.a20, &self.a10, n)))
    }
}

/// `n(n-1) a20 + n a10`.
pub fn classical_tau(a20: &Rational, a10: &Rational, n: usize) -> Rational {
    let n = n as i64;
    Rational::from_int(n * (n - 1)) * a20 + Rational::from_int(n) * a10
}

/// `(y_0, y_1) = (1, a10 x + a11)`.
pub fn classical_seed(eq: &ClassicalEquation) -> (UPoly<Rational>, UPoly<Rational>) {
    (
        UPoly::constant(Rational::from_int(1)),
        UPoly::linear(eq.a11.clone(), eq.a10.clone()),
    )
}

/// `y_{n+2} = (p x + q) y_{n+1} + r y_n`.
pub fn classical_recurrence_step(
    eq: &ClassicalEquation,
    y_n: &UPoly<Rational>,
    y_n1: &UPoly<Rational>,
    n: usize,
) -> Result<UPoly<Rational>, CriteriaError> {
    let ClassicalEquation { a20, a21, a22, a10, a11 } = eq;
    let r = |v: usize| Rational::from_int(v as i64);
    let d1 = r(n) * a20 + a10;
    let d2 = r(2 * n) * a20 + a10;
    if d1.is_zero() || d2.is_zero() {
        return Err(CriteriaError::DegenerateDenominator { n });
    }
    let f = r(2 * n + 1) * a20 + a10;
    let h = r(2 * (n + 1)) * a20 + a10;
    let lin = &f * &h / &d1;
    let cst_num = r(2 * n * (n + 1)) * a20 * a21 + r(2 * (n + 1)) * a10 * a21 - r(2) * a11 * a20 + a10 * a11;
    let cst = &f * cst_num / (&d1 * &d2);
    let nn = r(n);
    let g_num = r(4) * &nn * &nn * a22 * a20 * a20 + a20 * a11 * a11 + r(4) * &nn * a20 * a10 * a22
        - &nn * &nn * a20 * a21 * a21
        + a10 * a10 * a22
        - a11 * a10 * a21
        - &nn * a10 * a21 * a21;
    let g = r(n + 1) * &h * g_num / (&d1 * &d2);
    let first = y_n1 * &UPoly::linear(cst, lin);
    Ok(&first + &y_n.scale(&g))
}

/// `y_0 ..= y_count` from the seed and the three-term recurrence.
pub fn classical_polynomials(eq: &ClassicalEquation, count: usize) -> Result<Vec<UPoly<Rational>>, CriteriaError> {
    let (y0, y1) = classical_seed(eq);
    let mut out = vec![y0, y1];
    for n in 0..count.saturating_sub(1) {
        let next = classical_recurrence_step(eq, &out[n], &out[n + 1], n)?;
        out.push(next);
    }
    out.truncate(count + 1);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{construct_solution, verify_solution};
    use crate::exactalg::rational::rat;

    fn bessel() -> ClassicalEquation {
        ClassicalEquation::from_ints(1, 0, 0, 2, 2)
    }

    #[test]
    fn tau_values() {
        for n in 0..6 {
            assert_eq!(classical_tau(&rat(1), &rat(2), n), rat((n * (n + 1)) as i64));
            assert_eq!(classical_tau(&rat(0), &rat(7), n), rat(7 * n as i64));
        }
        assert_eq!(classical_tau(&rat(1), &rat(0), 3), rat(6));
    }

    #[test]
    fn bessel_step_matches_displayed_recurrence() {
        let eq = bessel();
        let (y0, y1) = classical_seed(&eq);
        assert_eq!(y1, UPoly::from_ints(&[2, 2]));
        let y2 = classical_recurrence_step(&eq, &y0, &y1, 0).unwrap();
        assert_eq!(y2, UPoly::from_ints(&[4, 12, 12]));
        let ys = classical_polynomials(&eq, 6).unwrap();
        for n in 0..5 {
            let expect = &(&ys[n + 1] * &UPoly::monomial(rat(2 * (2 * n as i64 + 3)), 1)) + &ys[n].scale(&rat(4));
            assert_eq!(ys[n + 2], expect);
        }
    }

    #[test]
    fn recurrence_output_solves_the_equation() {
        // Bessel, Hermite-like, Laguerre-like, Jacobi-like, and a shifted generic case.
        let cases = [
            bessel(),
            ClassicalEquation::from_ints(0, 0, 1, -2, 0),
            ClassicalEquation::from_ints(0, 1, 0, -1, 3),
            ClassicalEquation::from_ints(-1, 0, 1, -5, 1),
            ClassicalEquation::from_ints(2, 3, -1, 7, -2),
        ];
        for eq in &cases {
            let ys = classical_polynomials(eq, 7).unwrap();
            for (n, y) in ys.iter().enumerate() {
                let spec = eq.embed_degree(n).unwrap();
                assert!(verify_solution(&spec, y).unwrap(), "{eq:?} n = {n}");
                assert_eq!(construct_solution(&spec, n).unwrap().poly(), &y.primitive());
            }
        }
    }

    #[test]
    fn degenerate_denominator() {
        let eq = ClassicalEquation::from_ints(0, 0, 1, 0, 1);
        let (y0, y1) = classical_seed(&eq);
        assert_eq!(
            classical_recurrence_step(&eq, &y0, &y1, 0),
            Err(CriteriaError::DegenerateDenominator { n: 0 })
        );
        let eq = ClassicalEquation::from_ints(1, 0, 0, -2, 1);
        assert!(classical_polynomials(&eq, 4).is_err());
    }
}
