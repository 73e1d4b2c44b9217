//! Regression corpus of numeric equations and the cross-checks run over it.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aim::{aim_test_polynomial, AimOutcome};
use crate::analysis::constraints;
use crate::applications::{
    chhajlany_spec, coulomb_spec, davidson_eigenvalue, davidson_spec, hyper_build, hyper_spec_l2, krylov_robnik_spec,
    CoulombProblem, CoulombShift,
};
use crate::batch::{self, Execution};
use crate::criteria::{
    build_criterion_matrix, construct_solution, degree_condition, delta_determinant, nullspace, ClassicalEquation,
    CriteriaError, EquationSpec, Scalar,
};
use crate::exactalg::rational::{rat, ratio};
use crate::exactalg::{Rational, Ring};
use crate::heun::{heun_from_json, HeunFamily};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusCase {
    pub name: String,
    pub eq: EquationSpec,
    pub n: usize,
}

impl CorpusCase {
    fn new(name: impl Into<String>, eq: EquationSpec, n: usize) -> Self {
        CorpusCase {
            name: name.into(),
            eq,
            n,
        }
    }
}

/// Numeric cases: one per exactly rational constraint root, plus one value
/// off every root.
fn from_constraint(name: &str, eq: &EquationSpec, n: usize) -> Vec<CorpusCase> {
    let Ok(report) = constraints(eq, n, 1e-12) else {
        return Vec::new();
    };
    let exact = report.roots.map(|r| r.exact).unwrap_or_default();
    let off = exact.iter().fold(rat(1), |acc, r| if r >= &acc { r + rat(1) } else { acc });
    exact
        .iter()
        .map(|t| CorpusCase::new(format!("{name} at {t}"), eq.substitute(t), n))
        .chain(std::iter::once(CorpusCase::new(format!("{name} off-root"), eq.substitute(&off), n)))
        .collect()
}

fn s(v: Rational) -> Scalar {
    Scalar::constant(v)
}

/// The worked families at small degrees, with and without their conditions.
pub fn paper_cases() -> Vec<CorpusCase> {
    let mut out = Vec::new();
    let bessel = ClassicalEquation::from_ints(1, 0, 0, 2, 2);
    for n in 0..=6usize {
        out.push(CorpusCase::new(format!("bessel n={n}"), bessel.embed_degree(n).expect("valid"), n));
    }
    out.push(CorpusCase::new("bessel tau=5", bessel.embed(&rat(5)), 2));
    let hermite = ClassicalEquation::from_ints(0, 0, 1, -2, 0);
    for n in 0..=5usize {
        out.push(CorpusCase::new(format!("hermite n={n}"), hermite.embed_degree(n).expect("valid"), n));
    }
    for mu in [rat(0), ratio(1, 2), rat(1)] {
        for n in 0..=3usize {
            let m = s(mu.clone());
            let name = format!("davidson mu={mu} n={n}");
            out.push(CorpusCase::new(name.clone(), davidson_spec(&m, &davidson_eigenvalue(&m, n)), 2 * n));
            let off = davidson_eigenvalue(&m, n) + &Scalar::from_int(1);
            out.push(CorpusCase::new(format!("{name} off"), davidson_spec(&m, &off), 2 * n));
        }
    }
    for (alpha, n) in [(rat(1), 1usize), (rat(3), 1), (rat(3), 2), (ratio(1, 2), 2)] {
        let nn = Rational::from_int(n as i64);
        let beta = -(&nn * &nn) - (&alpha - rat(1)) * &nn;
        let eq = krylov_robnik_spec(&s(alpha.clone()), &s(beta), &Scalar::x()).with_unknown("gamma");
        out.extend(from_constraint(&format!("krylov alpha={alpha} n={n}"), &eq, n));
    }
    for (p, n) in [(rat(2), 1usize), (rat(0), 2), (rat(1), 3)] {
        let eq = chhajlany_spec(&s(p.clone()), &Scalar::from_int(2 * n as i64), &Scalar::x()).with_unknown("alpha");
        out.extend(from_constraint(&format!("chhajlany p={p} n={n}"), &eq, n));
    }
    for (d, l, n) in [(3u32, 0u32, 1usize), (3, 1, 1), (2, 0, 2), (3, 0, 2)] {
        let p = CoulombProblem::new(rat(1), CoulombShift::UnknownProduct, d, l).expect("valid");
        let eq = coulomb_spec(&p, n).expect("valid");
        out.extend(from_constraint(&format!("coulomb d={d} l={l} n={n}"), &eq, n));
    }
    for (m, n) in [(1usize, 0usize), (1, 1), (2, 2), (3, 1)] {
        let (a, b) = (rat(1), ratio(-1, 2));
        let sol = hyper_build(m, n, 2, &a, &b).expect("valid");
        let degree = sol.poly.coeffs().len() - 1;
        out.push(CorpusCase::new(format!("hyper m={m} n={n}"), hyper_spec_l2(m, n, &a, &b), degree));
    }
    let heun = [
        (HeunFamily::Confluent, r#"{"alpha":"1","beta":"0","gamma":"1","mu":{"t":["0","1"]},"nu":{"t":["-1","-1"]}}"#, 1),
        (HeunFamily::Biconfluent, r#"{"alpha":"0","beta":"1","gamma":"4","delta":{"t":["0","1"]}}"#, 1),
        (
            HeunFamily::General,
            r#"{"a":"8/5","alpha":"-1","beta":"3","gamma":"1","delta":"1","epsilon":"1","q":{"t":["0","1"]}}"#,
            1,
        ),
        (
            HeunFamily::General,
            r#"{"a":"-1","alpha":"-2","beta":"4","gamma":"1","delta":"1","epsilon":"1","q":{"t":["0","1"]}}"#,
            2,
        ),
    ];
    for (family, json, n) in heun {
        let (eq, _) = heun_from_json(family, json, n).expect("valid parameters");
        out.extend(from_constraint(&format!("heun {family:?} n={n}"), &eq, n));
    }
    out
}

/// Small-integer equations at `n <= 4`. About half satisfy the degree
/// condition with a rational `tau11` that makes the determinant vanish.
pub fn random_cases(seed: u64, count: usize) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a3: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-2..=2));
        let a2: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-3..=3));
        if a3.iter().all(|c| *c == 0) || a2.iter().all(|c| *c == 0) {
            continue;
        }
        let n = rng.gen_range(0..=4usize);
        let ni = n as i64;
        let mut tau10 = ni * (ni - 1) * a3[0] + ni * a2[0];
        if rng.gen_bool(0.2) {
            tau10 += rng.gen_range(1..=2);
        }
        let param = EquationSpec::new(
            a3.map(Scalar::from_int),
            a2.map(Scalar::from_int),
            [Scalar::from_int(tau10), Scalar::x()],
        )
        .expect("nonzero a3");
        let det = delta_determinant(&param, n);
        let roots = if det.is_zero() || det.is_constant() {
            Vec::new()
        } else {
            crate::solve::find_real_roots(&det, 1e-9).map(|r| r.exact).unwrap_or_default()
        };
        let tau11 = if !roots.is_empty() && rng.gen_bool(0.6) {
            roots[rng.gen_range(0..roots.len())].clone()
        } else {
            rat(rng.gen_range(-6..=6))
        };
        let name = format!("random #{} n={n}", out.len());
        out.push(CorpusCase::new(name, param.substitute(&tau11), n));
    }
    out
}

/// Worked families plus `count` seeded random equations.
pub fn regression_corpus(seed: u64, count: usize) -> Vec<CorpusCase> {
    let mut out = paper_cases();
    out.extend(random_cases(seed, count));
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub n: usize,
    /// Lowest degree `<= max(n, 1)` with a verified solution from the
    /// determinant path.
    pub solution_degree: Option<usize>,
    pub aim: AimOutcome,
    pub agree: bool,
}

/// Lowest degree `m <= max_degree` at which construction gives a verified
/// solution.
pub fn lowest_solution_degree(eq: &EquationSpec, max_degree: usize) -> Result<Option<usize>, CriteriaError> {
    for m in 0..=max_degree {
        if !degree_condition(eq, m).is_zero() {
            continue;
        }
        match construct_solution(eq, m) {
            Ok(sol) => return Ok(Some(sol.degree())),
            Err(CriteriaError::AmbiguousNullspace { basis }) => {
                if let Some(d) = basis.iter().filter(|s| s.residual_is_zero()).map(|s| s.degree()).min() {
                    return Ok(Some(d));
                }
            }
            Err(CriteriaError::NoNullspace { .. } | CriteriaError::ResidualNonzero) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Whether AIM capped at `max(n, 1)` terminates exactly when the
/// determinant path finds a verified solution of degree at most `max(n, 1)`.
/// `None` when AIM does not apply (`y''` coefficient zero, or `P2 = P1 = 0`).
pub fn cross_validate(case: &CorpusCase) -> Result<Option<CrossCheck>, CriteriaError> {
    let (p3, _, _) = case.eq.numeric_polys()?;
    if p3.is_zero() || case.eq.is_pure_second_derivative() {
        return Ok(None);
    }
    let cap = case.n.max(1);
    let solution_degree = lowest_solution_degree(&case.eq, cap)?;
    let aim = aim_test_polynomial(&case.eq, cap)?;
    let agree = match (solution_degree, aim.index()) {
        (Some(d), Some(i)) => i <= d.max(1),
        (None, None) => true,
        _ => false,
    };
    Ok(Some(CrossCheck {
        name: case.name.clone(),
        n: case.n,
        solution_degree,
        aim,
        agree,
    }))
}

pub fn cross_validate_all(cases: &[CorpusCase], exec: Execution) -> Result<Vec<CrossCheck>, CriteriaError> {
    let checks = batch::map(exec, cases, cross_validate).into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(checks.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub determinant_zero: bool,
    pub nullity: usize,
}

impl OracleCheck {
    pub fn agree(self) -> bool {
        self.determinant_zero == (self.nullity > 0)
    }
}

/// Bareiss determinant against the rank from independent row reduction.
pub fn oracle_check(eq: &EquationSpec, n: usize) -> OracleCheck {
    let m = build_criterion_matrix(eq, n).into_entries().map(|c| c.coeff(0));
    OracleCheck {
        determinant_zero: delta_determinant(eq, n).is_zero(),
        nullity: nullspace(&m).len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_cases_are_reproducible() {
        let a = random_cases(7, 30);
        assert_eq!(a, random_cases(7, 30));
        assert_ne!(a, random_cases(8, 30));
        assert!(a.iter().all(|c| c.eq.is_numeric()));
    }

    #[test]
    fn paper_cases_cover_both_outcomes() {
        let cases = paper_cases();
        let checks = cross_validate_all(&cases, Execution::Sequential).unwrap();
        assert!(checks.iter().any(|c| c.solution_degree.is_some()));
        assert!(checks.iter().any(|c| c.solution_degree.is_none()));
        let bad: Vec<_> = checks.iter().filter(|c| !c.agree).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn oracle_on_singular_and_regular() {
        let bessel = ClassicalEquation::from_ints(1, 0, 0, 2, 2);
        assert_eq!(
            oracle_check(&bessel.embed_degree(2).unwrap(), 2),
            OracleCheck {
                determinant_zero: true,
                nullity: 1
            }
        );
        assert!(!oracle_check(&bessel.embed(&rat(5)), 2).determinant_zero);
    }
}
