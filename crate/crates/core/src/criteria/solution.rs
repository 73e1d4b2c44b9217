use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{build_criterion_matrix, degree_condition, CriteriaError, EquationSpec, Scalar};
use crate::exactalg::{format_rational, Matrix, Rational, RationalRepr, UPoly};

/// A polynomial solution `y = sum c_k x^k`, stored primitive (coprime integer
/// coefficients, positive leading coefficient).
#[derive(Clone, Debug, PartialEq)]
pub struct PolySolution {
    poly: UPoly<Rational>,
    residual_is_zero: bool,
}

impl PolySolution {
    /// Normalizes `poly`; `None` for the zero polynomial.
    pub fn new(poly: &UPoly<Rational>, residual_is_zero: bool) -> Option<Self> {
        if poly.is_zero() {
            return None;
        }
        Some(PolySolution {
            poly: poly.primitive(),
            residual_is_zero,
        })
    }

    pub fn poly(&self) -> &UPoly<Rational> {
        &self.poly
    }

    /// `c_0 .. c_N`.
    pub fn coefficients(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    pub fn degree(&self) -> usize {
        self.poly.coeffs().len() - 1
    }

    pub fn residual_is_zero(&self) -> bool {
        self.residual_is_zero
    }
}

#[derive(Deserialize)]
struct SolutionRepr {
    coefficients: Vec<RationalRepr>,
    degree: usize,
    residual_is_zero: bool,
}

impl Serialize for PolySolution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.poly.coeffs().iter().map(format_rational).collect();
        let mut s = serializer.serialize_struct("PolySolution", 3)?;
        s.serialize_field("coefficients", &coeffs)?;
        s.serialize_field("degree", &self.degree())?;
        s.serialize_field("residual_is_zero", &self.residual_is_zero)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for PolySolution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SolutionRepr::deserialize(deserializer)?;
        let poly = UPoly::new(repr.coefficients.into_iter().map(|c| c.0).collect());
        let sol = PolySolution::new(&poly, repr.residual_is_zero)
            .ok_or_else(|| D::Error::custom("solution has no nonzero coefficient"))?;
        if sol.degree() != repr.degree {
            return Err(D::Error::custom("degree does not match coefficients"));
        }
        Ok(sol)
    }
}

/// Basis of the right null space of a rational matrix, by exact reduction to
/// reduced row echelon form. Each basis vector has a 1 in its free column.
pub fn nullspace(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Rational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            v
        })
        .collect()
}

/// `P3 y'' + P2 y' - P1 y` for a numeric equation.
pub fn residual(eq: &EquationSpec<Scalar>, y: &UPoly<Rational>) -> Result<UPoly<Rational>, CriteriaError> {
    let (p3, p2, p1) = eq.numeric_polys()?;
    let dy = y.derivative();
    let ddy = dy.derivative();
    Ok(&(&(&p3 * &ddy) + &(&p2 * &dy)) - &(&p1 * y))
}

/// True iff substituting `y` leaves the zero polynomial.
pub fn verify_solution(eq: &EquationSpec<Scalar>, y: &UPoly<Rational>) -> Result<bool, CriteriaError> {
    Ok(residual(eq, y)?.is_zero())
}

/// Exact null vector of the degree-`n` criterion matrix, checked by residual.
///
/// The returned degree may be below `n` when the null vector has trailing
/// zeros.
pub fn construct_solution(eq: &EquationSpec<Scalar>, n: usize) -> Result<PolySolution, CriteriaError> {
    if !eq.is_numeric() {
        return Err(CriteriaError::Parametric);
    }
    let cond = degree_condition(eq, n);
    if !cond.is_zero() {
        return Err(CriteriaError::DegreeConditionFails {
            n,
            value: format_rational(&cond.coeff(0)),
        });
    }
    let m = build_criterion_matrix(eq, n).into_entries().map(|c| c.coeff(0));
    let mut basis = Vec::new();
    for v in nullspace(&m) {
        let y = UPoly::new(v);
        let ok = verify_solution(eq, &y)?;
        basis.push(PolySolution::new(&y, ok).expect("null vector is nonzero"));
    }
    match basis.len() {
        0 => Err(CriteriaError::NoNullspace { n }),
        1 => {
            let sol = basis.pop().expect("one element");
            if sol.residual_is_zero {
                Ok(sol)
            } else {
                Err(CriteriaError::ResidualNonzero)
            }
        }
        _ => Err(CriteriaError::AmbiguousNullspace { basis }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    fn davidson(mu: Rational, degree: i64) -> EquationSpec {
        let tau10 = rat(-2 * degree);
        EquationSpec::numeric(
            [rat(0), rat(0), rat(1), rat(0)],
            [rat(-2), rat(0), (mu + rat(1)) * rat(2)],
            [tau10, rat(0)],
        )
        .unwrap()
    }

    #[test]
    fn davidson_degree_two_at_mu_zero() {
        let sol = construct_solution(&davidson(rat(0), 2), 2).unwrap();
        assert_eq!(sol.poly(), &UPoly::from_ints(&[-3, 0, 2]));
        assert_eq!(sol.degree(), 2);
        assert!(sol.residual_is_zero());
    }

    #[test]
    fn davidson_residual_at_half() {
        // y = 2x^2 - 3 - 2 mu
        let mu = ratio(1, 2);
        let y = UPoly::new(vec![rat(-3) - rat(2) * &mu, rat(0), rat(2)]);
        assert!(verify_solution(&davidson(mu, 2), &y).unwrap());
    }

    #[test]
    fn bessel_degree_one_and_two() {
        // x^2 y'' + (2x + 2) y' - n(n+1) y = 0
        let bessel = |n: i64| EquationSpec::from_ints([0, 1, 0, 0], [0, 2, 2], [0, n * (n + 1)]).unwrap();
        assert_eq!(construct_solution(&bessel(1), 1).unwrap().poly(), &UPoly::from_ints(&[1, 1]));
        let y2 = UPoly::from_ints(&[4, 12, 12]);
        assert!(verify_solution(&bessel(2), &y2).unwrap());
        assert_eq!(construct_solution(&bessel(2), 2).unwrap().poly(), &UPoly::from_ints(&[1, 3, 3]));
    }

    #[test]
    fn constant_solution_and_false_residual() {
        let eq = EquationSpec::from_ints([0, 1, 0, 0], [0, 2, 2], [0, 0]).unwrap();
        assert_eq!(construct_solution(&eq, 0).unwrap().poly(), &UPoly::from_ints(&[1]));
        let eq = EquationSpec::from_ints([0, 1, 0, 0], [0, 2, 2], [0, 3]).unwrap();
        assert!(!verify_solution(&eq, &UPoly::from_ints(&[1])).unwrap());
    }

    #[test]
    fn error_paths() {
        // leading balance is vacuous here; the determinant rejects tau11 = 5
        let eq = EquationSpec::from_ints([0, 1, 0, 0], [0, 2, 2], [0, 5]).unwrap();
        assert_eq!(construct_solution(&eq, 2), Err(CriteriaError::NoNullspace { n: 2 }));
        let eq = EquationSpec::from_ints([0, 1, 0, 0], [0, 2, 2], [6, 5]).unwrap();
        assert!(matches!(construct_solution(&eq, 0), Err(CriteriaError::DegreeConditionFails { .. })));
        // y'' = 0 has both 1 and x at degree 1
        let eq = EquationSpec::from_ints([0, 0, 0, 1], [0, 0, 0], [0, 0]).unwrap();
        match construct_solution(&eq, 1) {
            Err(CriteriaError::AmbiguousNullspace { basis }) => {
                assert_eq!(basis.len(), 2);
                assert!(basis.iter().all(PolySolution::residual_is_zero));
            }
            other => panic!("unexpected {other:?}"),
        }
        // x y'' + y' - 1 y: degree condition at n = 0 needs tau10 = 0, then row [tau11 = 1]
        let eq = EquationSpec::from_ints([0, 0, 1, 0], [0, 0, 1], [0, 1]).unwrap();
        assert_eq!(construct_solution(&eq, 0), Err(CriteriaError::NoNullspace { n: 0 }));
        let param = eq.map(|c| c.clone() + &Scalar::x());
        assert_eq!(construct_solution(&param, 1), Err(CriteriaError::Parametric));
    }

    #[test]
    fn nullspace_small() {
        let m = Matrix::from_rows(vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]]);
        let basis = nullspace(&m);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for i in 0..2 {
                let dot = (0..3).fold(rat(0), |acc, j| acc + m.get(i, j) * &v[j]);
                assert!(dot.is_zero());
            }
        }
        assert!(nullspace(&Matrix::<Rational>::identity(3)).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let sol = PolySolution::new(&UPoly::new(vec![ratio(-3, 2), rat(0), rat(1)]), true).unwrap();
        let text = serde_json::to_string(&sol).unwrap();
        assert_eq!(text, r#"{"coefficients":["-3","0","2"],"degree":2,"residual_is_zero":true}"#);
        let back: PolySolution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sol);
        assert!(serde_json::from_str::<PolySolution>(r#"{"coefficients":["1"],"degree":3,"residual_is_zero":true}"#).is_err());
    }
}
