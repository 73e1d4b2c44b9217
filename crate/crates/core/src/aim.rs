//! Asymptotic iteration on `y'' = lambda_0 y' + s_0 y`.
//!
//! With `P3 y'' + P2 y' - P1 y = 0` we have `lambda_0 = -P2/P3` and
//! `s_0 = P1/P3`. Every iterate shares the denominator `P3^{n+1}`, so only the
//! numerators are stored:
//!
//! ```text
//! L_n = L'_{n-1} P3 - n L_{n-1} P3' + S_{n-1} P3 - P2 L_{n-1}
//! S_n = S'_{n-1} P3 - n S_{n-1} P3' + P1 L_{n-1}
//! ```
//!
//! and `delta_n = lambda_n s_{n-1} - lambda_{n-1} s_n` vanishes iff
//! `L_n S_{n-1} - L_{n-1} S_n` does.

use num_traits::Zero;
use serde::Serialize;

use crate::criteria::{CriteriaError, EquationSpec, Scalar};
use crate::exactalg::{Rational, Ring, UPoly};

type Poly = UPoly<Rational>;

/// Numerators of `lambda_n` and `s_n` over `P3^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AimState {
    pub index: usize,
    pub lambda_num: Poly,
    pub s_num: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AimOutcome {
    /// First index whose `delta` vanishes with `lambda_n lambda_{n-1} != 0`.
    Terminated { index: usize },
    NotFound,
}

impl AimOutcome {
    pub fn index(self) -> Option<usize> {
        match self {
            AimOutcome::Terminated { index } => Some(index),
            AimOutcome::NotFound => None,
        }
    }
}

struct Coefficients {
    p3: Poly,
    dp3: Poly,
    p2: Poly,
    p1: Poly,
}

impl Coefficients {
    fn of(eq: &EquationSpec<Scalar>) -> Result<Self, CriteriaError> {
        let (p3, p2, p1) = eq.numeric_polys()?;
        if p3.is_zero() {
            return Err(CriteriaError::NotSecondOrder);
        }
        Ok(Coefficients {
            dp3: p3.derivative(),
            p3,
            p2,
            p1,
        })
    }

    fn step(&self, state: &AimState) -> AimState {
        let n = Rational::from_int(state.index as i64 + 1);
        let (l, s) = (&state.lambda_num, &state.s_num);
        let l_next = &(&(&(&l.derivative() * &self.p3) - &(l * &self.dp3).scale(&n)) + &(s * &self.p3)) - &(&self.p2 * l);
        let s_next = &(&(&s.derivative() * &self.p3) - &(s * &self.dp3).scale(&n)) + &(&self.p1 * l);
        AimState {
            index: state.index + 1,
            lambda_num: l_next,
            s_num: s_next,
        }
    }
}

/// State at index 0: `L_0 = -P2`, `S_0 = P1`.
pub fn aim_init(eq: &EquationSpec<Scalar>) -> Result<AimState, CriteriaError> {
    let c = Coefficients::of(eq)?;
    Ok(AimState {
        index: 0,
        lambda_num: -c.p2,
        s_num: c.p1,
    })
}

pub fn aim_iterate(state: &AimState, eq: &EquationSpec<Scalar>) -> Result<AimState, CriteriaError> {
    Ok(Coefficients::of(eq)?.step(state))
}

/// `L_n S_{n-1} - L_{n-1} S_n`.
pub fn aim_delta(prev: &AimState, cur: &AimState) -> Poly {
    &(&cur.lambda_num * &prev.s_num) - &(&prev.lambda_num * &cur.s_num)
}

/// Iterates `n = 1 ..= n_max` and reports the first terminating index.
pub fn aim_test_polynomial(eq: &EquationSpec<Scalar>, n_max: usize) -> Result<AimOutcome, CriteriaError> {
    let c = Coefficients::of(eq)?;
    let mut prev = AimState {
        index: 0,
        lambda_num: -c.p2.clone(),
        s_num: c.p1.clone(),
    };
    for _ in 1..=n_max {
        let cur = c.step(&prev);
        let guard = !cur.lambda_num.is_zero() && !prev.lambda_num.is_zero();
        if guard && aim_delta(&prev, &cur).is_zero() {
            return Ok(AimOutcome::Terminated { index: cur.index });
        }
        prev = cur;
    }
    Ok(AimOutcome::NotFound)
}

/// Iteration cap used when the caller gives none: `2n + 4` for target degree `n`.
pub fn default_n_max(degree: usize) -> usize {
    2 * degree + 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn davidson(mu: i64, eps: i64) -> EquationSpec {
        EquationSpec::from_ints([0, 0, 1, 0], [-2, 0, 2 * (mu + 1)], [2 * mu + 3 - eps, 0]).unwrap()
    }

    fn bessel(tau: i64) -> EquationSpec {
        EquationSpec::from_ints([0, 1, 0, 0], [0, 2, 2], [0, tau]).unwrap()
    }

    /// A rational function reduced by gcd after every operation.
    #[derive(Clone)]
    struct Frac(Poly, Poly);

    impl Frac {
        fn reduced(num: Poly, den: Poly) -> Frac {
            let g = num.gcd(&den);
            if g.is_zero() {
                return Frac(num, den);
            }
            Frac(num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        }
        fn add(&self, o: &Frac) -> Frac {
            Frac::reduced(&(&self.0 * &o.1) + &(&o.0 * &self.1), &self.1 * &o.1)
        }
        fn mul(&self, o: &Frac) -> Frac {
            Frac::reduced(&self.0 * &o.0, &self.1 * &o.1)
        }
        fn deriv(&self) -> Frac {
            Frac::reduced(
                &(&self.0.derivative() * &self.1) - &(&self.0 * &self.1.derivative()),
                &self.1 * &self.1,
            )
        }
        fn equals_over(&self, num: &Poly, den: &Poly) -> bool {
            &self.0 * den == num * &self.1
        }
    }

    #[test]
    fn cleared_recurrence_matches_direct_rational_functions() {
        let cases = [
            davidson(0, 7),
            EquationSpec::from_ints([1, -3, 2, 0], [4, 1, -1], [2, 5]).unwrap(),
            EquationSpec::from_ints([0, 2, 0, 1], [1, 0, 3], [-1, 2]).unwrap(),
        ];
        for eq in &cases {
            let (p3, p2, p1) = eq.numeric_polys().unwrap();
            let lambda0 = Frac(-p2.clone(), p3.clone());
            let s0 = Frac(p1.clone(), p3.clone());
            let (mut lam, mut s) = (lambda0.clone(), s0.clone());
            let mut state = aim_init(eq).unwrap();
            for n in 1..=3u32 {
                let lam_next = lam.deriv().add(&s).add(&lambda0.mul(&lam));
                let s_next = s.deriv().add(&s0.mul(&lam));
                lam = lam_next;
                s = s_next;
                state = aim_iterate(&state, eq).unwrap();
                let den = p3.pow(n + 1);
                assert!(lam.equals_over(&state.lambda_num, &den));
                assert!(s.equals_over(&state.s_num, &den));
            }
        }
    }

    #[test]
    fn init_reads_coefficients() {
        let s = aim_init(&davidson(0, 7)).unwrap();
        assert_eq!(s.lambda_num, UPoly::from_ints(&[-2, 0, 2]));
        assert_eq!(s.s_num, UPoly::from_ints(&[0, -4]));
        assert_eq!(aim_init(&bessel(6)).unwrap().lambda_num, UPoly::from_ints(&[-2, -2]));
        // y' only: no y'' coefficient
        let first_order = EquationSpec::from_ints([0, 0, 0, 0], [0, 1, 0], [0, 1]).unwrap();
        assert_eq!(aim_init(&first_order), Err(CriteriaError::NotSecondOrder));
    }

    #[test]
    fn single_step_on_y_double_prime_equals_y() {
        let eq = EquationSpec::from_ints([0, 0, 0, 1], [0, 0, 0], [0, 1]).unwrap();
        let s1 = aim_iterate(&aim_init(&eq).unwrap(), &eq).unwrap();
        assert_eq!(s1.lambda_num, UPoly::from_ints(&[1]));
        assert!(s1.s_num.is_zero());
    }

    #[test]
    fn davidson_terminates_only_at_eigenvalue() {
        assert_eq!(aim_test_polynomial(&davidson(0, 7), 8).unwrap(), AimOutcome::Terminated { index: 2 });
        let s0 = aim_init(&davidson(0, 0)).unwrap();
        let s1 = aim_iterate(&s0, &davidson(0, 0)).unwrap();
        assert!(!aim_delta(&s0, &s1).is_zero());
        assert_eq!(aim_test_polynomial(&davidson(0, 0), 8).unwrap(), AimOutcome::NotFound);
    }

    #[test]
    fn bessel_detection() {
        assert_eq!(aim_test_polynomial(&bessel(6), 8).unwrap().index(), Some(2));
        assert_eq!(aim_test_polynomial(&bessel(5), 8).unwrap(), AimOutcome::NotFound);
    }

    #[test]
    fn degenerate_guard() {
        let eq = EquationSpec::from_ints([0, 0, 0, 1], [0, 0, 0], [0, 0]).unwrap();
        let s0 = aim_init(&eq).unwrap();
        let s1 = aim_iterate(&s0, &eq).unwrap();
        assert!(aim_delta(&s0, &s1).is_zero());
        assert_eq!(aim_test_polynomial(&eq, 4).unwrap(), AimOutcome::NotFound);
    }

    #[test]
    fn delta_proportional_under_scaling() {
        let eq = EquationSpec::from_ints([1, -3, 2, 0], [4, 1, -1], [2, 5]).unwrap();
        let scaled = eq.map(|c| c.scale(&rat(3)));
        let (mut a, mut b) = (aim_init(&eq).unwrap(), aim_init(&scaled).unwrap());
        for _ in 0..3 {
            let (a1, b1) = (aim_iterate(&a, &eq).unwrap(), aim_iterate(&b, &scaled).unwrap());
            let (da, db) = (aim_delta(&a, &a1), aim_delta(&b, &b1));
            let k = db.leading().unwrap() / da.leading().unwrap();
            assert_eq!(db, da.scale(&k));
            a = a1;
            b = b1;
        }
        assert_eq!(default_n_max(3), 10);
    }
}
