//! End-to-end analysis of one equation at one degree, in the shape the CLI
//! prints.

use std::time::Instant;

use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::aim::{aim_test_polynomial, default_n_max, AimOutcome};
use crate::applications::ApplicationError;
use crate::batch::{self, Execution};
use crate::criteria::{
    construct_solution, degree_condition, delta_determinant, CriteriaError, EquationSpec, PolySolution, Scalar,
};
use crate::exactalg::{format_rational, Rational, UPoly};
use crate::solve::{find_real_roots, RootReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("equation has no unknown parameter; use `check` instead")]
    NoUnknown,
    #[error("equation has an unknown parameter {0:?}; declare it with --unknown or use `constraints`")]
    UndeclaredUnknown(String),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Application(#[from] ApplicationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Determinant,
    Aim,
    Both,
}

impl Method {
    fn determinant(self) -> bool {
        self != Method::Aim
    }

    fn aim(self) -> bool {
        self != Method::Determinant
    }
}

/// A polynomial as display text plus ascending exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyView {
    pub poly: UPoly<Rational>,
    pub var: String,
}

impl PolyView {
    pub fn new(poly: UPoly<Rational>, var: &str) -> Self {
        PolyView {
            poly,
            var: var.to_string(),
        }
    }
}

impl Serialize for PolyView {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.poly.coeffs().iter().map(format_rational).collect();
        let mut st = s.serialize_struct("PolyView", 2)?;
        st.serialize_field("polynomial", &self.poly.to_string_in(&self.var))?;
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DegreeStatus {
    Holds,
    Fails {
        value: String,
    },
    /// Holds only where this polynomial in the unknown vanishes.
    Requires {
        polynomial: PolyView,
    },
}

impl DegreeStatus {
    fn of(cond: &Scalar, var: &str) -> Self {
        if cond.is_zero() {
            DegreeStatus::Holds
        } else if cond.is_constant() {
            DegreeStatus::Fails {
                value: format_rational(&cond.coeff(0)),
            }
        } else {
            DegreeStatus::Requires {
                polynomial: PolyView::new(cond.clone(), var),
            }
        }
    }
}

/// A verified solution and the parameter value it was found at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundSolution {
    #[serde(serialize_with = "ser_opt_rational")]
    pub parameter: Option<Rational>,
    pub solution: PolySolution,
}

fn ser_opt_rational<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AimReport {
    pub n_max: usize,
    #[serde(flatten)]
    pub outcome: AimOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub equation: EquationSpec,
    pub n: usize,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_condition: Option<DegreeStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<PolyView>,
    /// Common zero set of the degree condition and the determinant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint: Option<PolyView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootReport>,
    pub solutions: Vec<FoundSolution>,
    /// The null space had dimension above one.
    pub ambiguous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aim: Option<AimReport>,
    pub exists: bool,
    pub elapsed_ms: f64,
}

impl AnalysisReport {
    /// 0 when a verified solution exists (or AIM terminates, AIM-only), 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.exists {
            0
        } else {
            2
        }
    }

    fn blank(eq: &EquationSpec, n: usize, method: Method) -> Self {
        AnalysisReport {
            equation: eq.clone(),
            n,
            method,
            degree_condition: None,
            determinant: None,
            constraint: None,
            roots: None,
            solutions: Vec::new(),
            ambiguous: false,
            aim: None,
            exists: false,
            elapsed_ms: 0.0,
        }
    }

    /// Multi-line text for humans.
    pub fn summary(&self) -> String {
        let var = self.equation.unknown();
        let mut out = format!("degree n = {}", self.n);
        if let Some(d) = &self.degree_condition {
            let s = match d {
                DegreeStatus::Holds => "holds".to_string(),
                DegreeStatus::Fails { value } => format!("fails (value {value})"),
                DegreeStatus::Requires { polynomial } => format!("requires {} = 0", polynomial.poly.to_string_in(var)),
            };
            out += &format!("\n  degree condition: {s}");
        }
        if let Some(d) = &self.determinant {
            out += &format!("\n  determinant: {}", d.poly.to_string_in(var));
        }
        if let Some(c) = &self.constraint {
            out += &format!("\n  constraint: {} = 0", c.poly.to_string_in(var));
        }
        if let Some(r) = &self.roots {
            let exact: Vec<String> = r.exact.iter().map(format_rational).collect();
            out += &format!("\n  real roots: {:?} (exact: [{}])", r.roots, exact.join(", "));
        }
        for s in &self.solutions {
            let at = s.parameter.as_ref().map(|p| format!(" at {var} = {}", format_rational(p))).unwrap_or_default();
            out += &format!("\n  solution{at}: {}", s.solution.poly());
        }
        if self.ambiguous {
            out += "\n  null space has dimension > 1";
        }
        if let Some(a) = &self.aim {
            let s = match (&a.error, a.outcome) {
                (Some(e), _) => format!("error: {e}"),
                (None, AimOutcome::Terminated { index }) => format!("terminates at index {index}"),
                (None, AimOutcome::NotFound) => format!("no termination up to {}", a.n_max),
            };
            out += &format!("\n  AIM: {s}");
        }
        out += &format!("\n  polynomial solution: {}", if self.exists { "yes" } else { "no" });
        out
    }
}

/// Solutions at degree `n` of a numeric equation; an ambiguous null space
/// returns its verified basis.
fn solutions_at(eq: &EquationSpec, n: usize) -> Result<(Vec<PolySolution>, bool), CriteriaError> {
    match construct_solution(eq, n) {
        Ok(s) => Ok((vec![s], false)),
        Err(CriteriaError::AmbiguousNullspace { basis }) => {
            Ok((basis.into_iter().filter(|s| s.residual_is_zero()).collect(), true))
        }
        Err(
            CriteriaError::NoNullspace { .. }
            | CriteriaError::ResidualNonzero
            | CriteriaError::DegreeConditionFails { .. },
        ) => Ok((Vec::new(), false)),
        Err(e) => Err(e),
    }
}

/// Criteria for a numeric equation at degree `n`. `n_max` caps the AIM
/// iteration (default `2n + 4`).
pub fn check(eq: &EquationSpec, n: usize, method: Method, n_max: Option<usize>) -> Result<AnalysisReport, AnalysisError> {
    let start = Instant::now();
    if !eq.is_numeric() {
        return Err(AnalysisError::UndeclaredUnknown(eq.unknown().to_string()));
    }
    let var = eq.unknown();
    let mut report = AnalysisReport::blank(eq, n, method);
    if method.determinant() {
        let cond = degree_condition(eq, n);
        report.degree_condition = Some(DegreeStatus::of(&cond, var));
        report.determinant = Some(PolyView::new(delta_determinant(eq, n), var));
        if cond.is_zero() {
            let (sols, ambiguous) = solutions_at(eq, n)?;
            report.ambiguous = ambiguous;
            report.solutions = sols
                .into_iter()
                .map(|solution| FoundSolution {
                    parameter: None,
                    solution,
                })
                .collect();
        }
        report.exists = !report.solutions.is_empty();
    }
    if method.aim() {
        let n_max = n_max.unwrap_or_else(|| default_n_max(n));
        let (outcome, error) = match aim_test_polynomial(eq, n_max) {
            Ok(o) => (o, None),
            Err(e) => (AimOutcome::NotFound, Some(e.to_string())),
        };
        if method == Method::Aim {
            report.exists = outcome.index().is_some();
        }
        report.aim = Some(AimReport { n_max, outcome, error });
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Parameter values in the one unknown that admit a degree-`n` solution.
/// Every exactly rational value is carried through to a verified solution.
pub fn constraints(eq: &EquationSpec, n: usize, tolerance: f64) -> Result<AnalysisReport, AnalysisError> {
    let start = Instant::now();
    if eq.is_numeric() {
        return Err(AnalysisError::NoUnknown);
    }
    eq.check_linear_in_unknown()?;
    let var = eq.unknown();
    let mut report = AnalysisReport::blank(eq, n, Method::Determinant);
    let cond = degree_condition(eq, n);
    let det = delta_determinant(eq, n);
    let joint = if cond.is_zero() {
        det.clone()
    } else if det.is_zero() {
        cond.clone()
    } else {
        cond.gcd(&det)
    };
    report.degree_condition = Some(DegreeStatus::of(&cond, var));
    report.determinant = Some(PolyView::new(det, var));
    // both conditions vanish identically: every value works, sample t = 0
    let candidates = if joint.is_zero() {
        vec![Rational::zero()]
    } else {
        let joint = joint.primitive();
        let roots = if joint.is_constant() {
            RootReport::empty(joint.clone())
        } else {
            find_real_roots(&joint, tolerance).expect("nonzero polynomial")
        };
        let exact = roots.exact.clone();
        report.constraint = Some(PolyView::new(joint, var));
        report.roots = Some(roots);
        exact
    };
    for t in candidates {
        let (sols, ambiguous) = solutions_at(&eq.substitute(&t), n)?;
        report.ambiguous |= ambiguous;
        report.solutions.extend(sols.into_iter().map(|solution| FoundSolution {
            parameter: Some(t.clone()),
            solution,
        }));
    }
    report.exists = !report.solutions.is_empty();
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Numeric equations go through [`check`], parametric ones through
/// [`constraints`].
pub fn analyze(eq: &EquationSpec, n: usize, method: Method, tolerance: f64) -> Result<AnalysisReport, AnalysisError> {
    if eq.is_numeric() {
        check(eq, n, method, None)
    } else {
        constraints(eq, n, tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    /// Degrees `n` with a verified solution of exact degree `n`.
    pub degrees: Vec<usize>,
    pub reports: Vec<AnalysisReport>,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        if self.degrees.is_empty() {
            2
        } else {
            0
        }
    }
}

/// Runs `analyze` at every `n = 0..=max_n`; degrees are independent.
pub fn sweep(
    eq: &EquationSpec,
    max_n: usize,
    method: Method,
    tolerance: f64,
    exec: Execution,
) -> Result<SweepReport, AnalysisError> {
    let degrees: Vec<usize> = (0..=max_n).collect();
    let reports = batch::map(exec, &degrees, |&n| analyze(eq, n, method, tolerance))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepReport {
        degrees: reports
            .iter()
            .filter(|r| r.solutions.iter().any(|s| s.solution.degree() == r.n))
            .map(|r| r.n)
            .collect(),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::verify_solution;
    use crate::exactalg::rational::rat;
    use crate::exactalg::Ring;

    fn bessel(tau: i64) -> EquationSpec {
        EquationSpec::from_ints([0, 1, 0, 0], [0, 2, 2], [0, tau]).unwrap()
    }

    #[test]
    fn check_bessel() {
        let r = check(&bessel(6), 2, Method::Both, None).unwrap();
        assert!(r.exists);
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.solutions[0].solution.poly(), &UPoly::from_ints(&[1, 3, 3]));
        assert_eq!(r.aim.as_ref().unwrap().outcome, AimOutcome::Terminated { index: 2 });
        let r = check(&bessel(5), 2, Method::Both, None).unwrap();
        assert!(!r.exists && r.solutions.is_empty());
        assert_eq!(r.aim.as_ref().unwrap().outcome, AimOutcome::NotFound);
        assert_eq!(r.exit_code(), 2);
        let r = check(&bessel(5), 2, Method::Aim, Some(8)).unwrap();
        assert!(r.determinant.is_none() && !r.exists);
    }

    #[test]
    fn check_rejects_parameters() {
        let eq = bessel(6).map(|c| c + &Scalar::x());
        assert_eq!(check(&eq, 1, Method::Both, None), Err(AnalysisError::UndeclaredUnknown("t".into())));
        assert_eq!(constraints(&bessel(6), 1, 1e-12), Err(AnalysisError::NoUnknown));
    }

    #[test]
    fn constraints_krylov_robnik() {
        // x^3 y'' + (x^2 - 1) y' + (-x + t) y = 0 at n = 1: t^2 - 1
        let eq = crate::applications::krylov_robnik_spec(&Scalar::from_int(1), &Scalar::from_int(-1), &Scalar::x());
        let r = constraints(&eq, 1, 1e-12).unwrap();
        assert_eq!(r.constraint.as_ref().unwrap().poly, UPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(r.roots.as_ref().unwrap().exact, vec![rat(-1), rat(1)]);
        assert_eq!(r.solutions.len(), 2);
        for s in &r.solutions {
            let at = eq.substitute(s.parameter.as_ref().unwrap());
            assert!(verify_solution(&at, s.solution.poly()).unwrap());
        }
        let json: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(json["roots"]["exact"], serde_json::json!(["-1", "1"]));
        assert_eq!(json["degree_condition"]["status"], "holds");
    }

    #[test]
    fn constant_determinant_has_no_roots() {
        // y'' + t y' - y = 0 at n = 0: determinant is the constant 1
        let eq = EquationSpec::new(
            [0, 0, 0, 1].map(Scalar::from_int),
            [Scalar::zero(), Scalar::zero(), Scalar::x()],
            [Scalar::zero(), Scalar::from_int(1)],
        )
        .unwrap();
        let r = constraints(&eq, 0, 1e-12).unwrap();
        assert!(r.roots.as_ref().unwrap().intervals.is_empty());
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn sweep_modes_agree() {
        let eq = bessel(6);
        let a = sweep(&eq, 4, Method::Determinant, 1e-12, Execution::Sequential).unwrap();
        let b = sweep(&eq, 4, Method::Determinant, 1e-12, Execution::Parallel).unwrap();
        assert_eq!(a.degrees, vec![2]);
        assert_eq!(a.degrees, b.degrees);
        assert_eq!(a.exit_code(), 0);
    }
}
