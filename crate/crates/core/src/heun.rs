//! Confluent, biconfluent and general Heun equations as cubic-coefficient
//! instances, with their closed-form degree conditions.
//!
//! Parameter structs are generic over the coefficient ring so the conditions
//! can be checked with every parameter symbolic (nested polynomial rings).

use std::fmt;

use crate::criteria::{CriteriaError, CriterionMatrix, EquationSpec, Scalar};
use crate::exactalg::Ring;

/// `z(z-1) y'' + (alpha z^2 + (gamma + beta - alpha + 2) z + 1 - alpha) y'
/// + ((mu + nu) z - mu) y = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfluentHeunParams<R = Scalar> {
    pub alpha: R,
    pub beta: R,
    pub gamma: R,
    pub mu: R,
    pub nu: R,
}

/// `x y'' + (-2x^2 - beta x + alpha + 1) y'
/// + ((gamma - alpha - 2) x - (delta + (alpha + 1) beta) / 2) y = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiconfluentHeunParams<R = Scalar> {
    pub alpha: R,
    pub beta: R,
    pub gamma: R,
    pub delta: R,
}

/// `z(z-1)(z-a) y'' + ((gamma + epsilon + delta) z^2 - (a(delta + gamma) + epsilon + gamma) z + a gamma) y'
/// + (alpha beta z - q) y = 0`, subject to `1 + alpha + beta = gamma + delta + epsilon`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralHeunParams<R = Scalar> {
    pub a: R,
    pub alpha: R,
    pub beta: R,
    pub gamma: R,
    pub delta: R,
    pub epsilon: R,
    pub q: R,
}

/// Parameters break `1 + alpha + beta = gamma + delta + epsilon`.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianViolation<R> {
    /// `1 + alpha + beta - gamma - delta - epsilon`.
    pub residual: R,
}

impl<R: fmt::Debug> fmt::Display for FuchsianViolation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fuchsian condition fails: residual {:?}", self.residual)
    }
}

impl<R: fmt::Debug> std::error::Error for FuchsianViolation<R> {}

fn int<R: Ring>(n: i64) -> R {
    R::from_int(n)
}

fn half<R: Ring>(r: R) -> R {
    r.exact_div(&int(2)).expect("coefficient ring contains 1/2")
}

pub fn confluent_to_spec<R: Ring>(p: &ConfluentHeunParams<R>) -> EquationSpec<R> {
    let ConfluentHeunParams { alpha, beta, gamma, mu, nu } = p.clone();
    EquationSpec::new(
        [R::zero(), int(1), int(-1), R::zero()],
        [alpha.clone(), gamma + &beta - &alpha + &int(2), int::<R>(1) - &alpha],
        [-(mu.clone() + &nu), mu],
    )
    .expect("y'' coefficient is nonzero")
}

pub fn biconfluent_to_spec<R: Ring>(p: &BiconfluentHeunParams<R>) -> EquationSpec<R> {
    let BiconfluentHeunParams { alpha, beta, gamma, delta } = p.clone();
    let a1 = alpha.clone() + &int(1);
    EquationSpec::new(
        [R::zero(), R::zero(), int(1), R::zero()],
        [int(-2), -beta.clone(), a1.clone()],
        [-(gamma - &alpha - &int(2)), half(delta + &(a1 * &beta))],
    )
    .expect("y'' coefficient is nonzero")
}

/// `1 + alpha + beta - gamma - delta - epsilon`.
pub fn fuchsian_residual<R: Ring>(p: &GeneralHeunParams<R>) -> R {
    int::<R>(1) + &p.alpha + &p.beta - &p.gamma - &p.delta - &p.epsilon
}

pub fn general_to_spec<R: Ring>(p: &GeneralHeunParams<R>) -> Result<EquationSpec<R>, FuchsianViolation<R>> {
    let residual = fuchsian_residual(p);
    if !residual.is_zero() {
        return Err(FuchsianViolation { residual });
    }
    let GeneralHeunParams { a, alpha, beta, gamma, delta, epsilon, q } = p.clone();
    let spec = EquationSpec::new(
        [int(1), -(a.clone() + &int(1)), a.clone(), R::zero()],
        [
            gamma.clone() + &epsilon + &delta,
            -(a.clone() * &(delta + &gamma) + &epsilon + &gamma),
            a * &gamma,
        ],
        [-(alpha * &beta), q],
    )
    .expect("y'' coefficient is nonzero");
    Ok(spec)
}

/// `mu + nu + n alpha`; degree `n` needs this to vanish.
pub fn confluent_condition<R: Ring>(p: &ConfluentHeunParams<R>, n: usize) -> R {
    p.mu.clone() + &p.nu + &(int::<R>(n as i64) * &p.alpha)
}

/// `gamma - alpha - 2(n + 1)`.
pub fn biconfluent_condition<R: Ring>(p: &BiconfluentHeunParams<R>, n: usize) -> R {
    p.gamma.clone() - &p.alpha - &int(2 * (n as i64 + 1))
}

/// `alpha beta + n(n-1) + n(gamma + epsilon + delta)`.
pub fn general_condition<R: Ring>(p: &GeneralHeunParams<R>, n: usize) -> R {
    let n = n as i64;
    p.alpha.clone() * &p.beta
        + &int(n * (n - 1))
        + &(int::<R>(n) * &(p.gamma.clone() + &p.epsilon + &p.delta))
}

/// `(alpha + n)(beta + n)`, equal to [`general_condition`] when the Fuchsian
/// condition holds.
pub fn general_condition_factored<R: Ring>(p: &GeneralHeunParams<R>, n: usize) -> R {
    let n = int::<R>(n as i64);
    (p.alpha.clone() + &n) * &(p.beta.clone() + &n)
}

/// One entry of a reference table: position and expected value.
#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry<R> {
    pub row: usize,
    pub col: usize,
    pub value: R,
}

/// A reference entry that disagrees with the generated matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TableMismatch<R> {
    pub row: usize,
    pub col: usize,
    pub listed: R,
    pub generated: R,
}

struct Rows<R> {
    n: usize,
    out: Vec<TableEntry<R>>,
}

impl<R> Rows<R> {
    fn push(&mut self, row: usize, col: usize, value: R) {
        if row <= self.n && col <= self.n && !self.out.iter().any(|e| e.row == row && e.col == col) {
            self.out.push(TableEntry { row, col, value });
        }
    }
}

/// Commonly listed entries of the confluent matrix: rows 0, 1, 2 and `n`.
/// The sub-diagonal entries assume `mu + nu = -n alpha`.
pub fn confluent_listed_entries<R: Ring>(p: &ConfluentHeunParams<R>, n: usize) -> Vec<TableEntry<R>> {
    let ConfluentHeunParams { alpha, beta, gamma, mu, .. } = p;
    let s = gamma.clone() + beta - alpha;
    let am1 = alpha.clone() - &int(1);
    let k = |v: usize| int::<R>(v as i64);
    let mut t = Rows { n, out: Vec::new() };
    let last = |t: &mut Rows<R>| {
        if n > 2 {
            t.push(n, n - 1, alpha.clone());
            let inner = k(n) - &int(1) + &s + &int(2);
            t.push(n, n, mu.clone() - &(k(n) * &inner));
        }
    };
    last(&mut t);
    t.push(0, 0, mu.clone());
    t.push(0, 1, am1.clone());
    t.push(1, 0, k(n) * alpha);
    t.push(1, 1, mu.clone() - &(s.clone() + &int(2)));
    t.push(1, 2, k(2) * &am1);
    t.push(2, 1, k(n.saturating_sub(1)) * alpha);
    t.push(2, 2, mu.clone() - &(k(2) * &(s + &int(3))));
    t.push(2, 3, k(3) * &am1);
    t.out
}

/// Commonly listed entries of the biconfluent matrix: rows 0, 1, 2, `n-1`
/// and `n`.
pub fn biconfluent_listed_entries<R: Ring>(p: &BiconfluentHeunParams<R>, n: usize) -> Vec<TableEntry<R>> {
    let BiconfluentHeunParams { alpha, beta, gamma, delta } = p;
    let d = half(delta.clone() + &((alpha.clone() + &int(1)) * beta));
    let g = -(gamma.clone() - alpha - &int(2));
    let k = |v: i64| int::<R>(v);
    let ni = n as i64;
    let mut t = Rows { n, out: Vec::new() };
    if n > 3 {
        let m = n - 1;
        t.push(m, m - 1, g.clone() + &k(2 * (ni - 2)));
        t.push(m, m, d.clone() - &k((ni - 1) * (ni - 2)) + &(k(ni - 1) * beta));
        t.push(m, n, -(k(ni) * &(alpha.clone() + &k(ni))));
    }
    if n > 2 {
        t.push(n, n - 1, g.clone() + &k(2 * (ni - 1)));
        t.push(n, n, d.clone() * beta - &k(ni * (ni - 1)) + &(k(ni) * beta));
    }
    t.push(0, 0, d.clone());
    t.push(0, 1, -(alpha.clone() + &k(1)));
    t.push(1, 0, g.clone());
    t.push(1, 1, d.clone() + beta);
    t.push(1, 2, -(k(2) * &(alpha.clone() + &k(2))));
    t.push(2, 1, g + &k(2));
    t.push(2, 2, d + &(k(2) * beta));
    t.push(2, 3, -(k(3) * &(alpha.clone() + &k(3))));
    t.out
}

/// Commonly listed entries of the general Heun matrix: rows 0, 1, 2 and `n`.
pub fn general_listed_entries<R: Ring>(p: &GeneralHeunParams<R>, n: usize) -> Vec<TableEntry<R>> {
    let GeneralHeunParams { a, alpha, beta, gamma, delta, epsilon, q } = p;
    let ab = alpha.clone() * beta;
    let sum = gamma.clone() + epsilon + delta;
    let w = a.clone() * &(delta.clone() + gamma) + epsilon + gamma;
    let k = |v: i64| int::<R>(v);
    let ni = n as i64;
    let mut t = Rows { n, out: Vec::new() };
    if n > 2 {
        t.push(n, n - 1, -ab.clone() - &(k(ni - 1) * &(k(ni - 2) + &sum)));
        let w_listed = a.clone() * &(delta.clone() + gamma) + epsilon + delta;
        t.push(n, n, q.clone() + &(k(ni * (ni - 1)) * &(k(1) + a)) + &(k(ni) * &w_listed));
    }
    t.push(0, 0, q.clone());
    t.push(0, 1, -(a.clone() * gamma));
    t.push(1, 0, -ab.clone());
    t.push(1, 1, q.clone() + &w);
    t.push(1, 2, -(k(2) * a * &(k(1) + gamma)));
    t.push(2, 1, -ab - &sum);
    t.push(2, 2, q.clone() + &(k(2) * &(a.clone() + &k(1))) + &(k(2) * &w));
    t.push(2, 3, -(k(3) * &(-(k(2) * &w) + &(a.clone() * gamma))));
    t.out
}

/// Listed entries that differ from the generated matrix.
pub fn listed_mismatches<R: Ring>(m: &CriterionMatrix<R>, listed: &[TableEntry<R>]) -> Vec<TableMismatch<R>> {
    let mut out: Vec<_> = listed
        .iter()
        .filter(|e| m.get(e.row, e.col) != &e.value)
        .map(|e| TableMismatch {
            row: e.row,
            col: e.col,
            listed: e.value.clone(),
            generated: m.get(e.row, e.col).clone(),
        })
        .collect();
    out.sort_by_key(|e| (e.row, e.col));
    out
}

/// Heun family selector for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeunFamily {
    Confluent,
    Biconfluent,
    General,
}

impl HeunFamily {
    pub const NAMES: [&'static str; 3] = ["confluent", "biconfluent", "general"];

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "confluent" => Some(HeunFamily::Confluent),
            "biconfluent" => Some(HeunFamily::Biconfluent),
            "general" => Some(HeunFamily::General),
            _ => None,
        }
    }

    pub fn fields(self) -> &'static [&'static str] {
        match self {
            HeunFamily::Confluent => &["alpha", "beta", "gamma", "mu", "nu"],
            HeunFamily::Biconfluent => &["alpha", "beta", "gamma", "delta"],
            HeunFamily::General => &["a", "alpha", "beta", "gamma", "delta", "epsilon", "q"],
        }
    }
}

/// Builds the equation for `family` from a JSON object of named parameters,
/// each in the coefficient format. Returns the equation and the closed-form
/// degree condition at `n` (zero when it holds).
pub fn heun_from_json(family: HeunFamily, text: &str, n: usize) -> Result<(EquationSpec, Scalar), CriteriaError> {
    let (v, unknown) = crate::criteria::scalars_from_json(text, family.fields())?;
    let (spec, cond) = match family {
        HeunFamily::Confluent => {
            let p = ConfluentHeunParams {
                alpha: v[0].clone(),
                beta: v[1].clone(),
                gamma: v[2].clone(),
                mu: v[3].clone(),
                nu: v[4].clone(),
            };
            (confluent_to_spec(&p), confluent_condition(&p, n))
        }
        HeunFamily::Biconfluent => {
            let p = BiconfluentHeunParams {
                alpha: v[0].clone(),
                beta: v[1].clone(),
                gamma: v[2].clone(),
                delta: v[3].clone(),
            };
            (biconfluent_to_spec(&p), biconfluent_condition(&p, n))
        }
        HeunFamily::General => {
            let p = GeneralHeunParams {
                a: v[0].clone(),
                alpha: v[1].clone(),
                beta: v[2].clone(),
                gamma: v[3].clone(),
                delta: v[4].clone(),
                epsilon: v[5].clone(),
                q: v[6].clone(),
            };
            let spec = general_to_spec(&p).map_err(|e| CriteriaError::Json(format!(
                "Fuchsian condition fails: residual {}",
                e.residual.to_string_in(&unknown)
            )))?;
            (spec, general_condition(&p, n))
        }
    };
    Ok((spec.with_unknown(unknown), cond))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{build_criterion_matrix, degree_condition, delta_determinant};
    use crate::exactalg::rational::{rat, ratio};
    use crate::exactalg::{Rational, UPoly};
    use num_traits::Zero;

    type Q1 = UPoly<Rational>;
    type Q2 = UPoly<Q1>;
    type Q3 = UPoly<Q2>;

    fn c3(v: i64) -> Q3 {
        Q3::from_int(v)
    }

    /// Variables of `Q[x][y][z]`, `x` innermost.
    fn vars3() -> (Q3, Q3, Q3) {
        let x = Q3::constant(Q2::constant(Q1::x()));
        let y = Q3::constant(Q2::x());
        let z = Q3::x();
        (x, y, z)
    }

    fn s(v: Rational) -> Scalar {
        Scalar::constant(v)
    }

    #[test]
    fn confluent_condition_symbolic() {
        let (alpha, mu, nu) = vars3();
        let p = ConfluentHeunParams { alpha, beta: c3(5), gamma: c3(-3), mu, nu };
        let spec = confluent_to_spec(&p);
        for n in 0..=8 {
            assert_eq!(degree_condition(&spec, n), -confluent_condition(&p, n));
        }
    }

    #[test]
    fn biconfluent_condition_symbolic() {
        let (alpha, beta, gamma) = vars3();
        let p = BiconfluentHeunParams { alpha, beta, gamma, delta: c3(7) };
        let spec = biconfluent_to_spec(&p);
        for n in 0..=8 {
            assert_eq!(degree_condition(&spec, n), -biconfluent_condition(&p, n));
        }
    }

    #[test]
    fn general_condition_symbolic() {
        // epsilon eliminated through the Fuchsian relation; gamma, delta fixed
        let (alpha, beta, gamma) = vars3();
        let delta = c3(3);
        let epsilon = c3(1) + &alpha + &beta - &gamma - &delta;
        let p = GeneralHeunParams { a: c3(2), alpha, beta, gamma, delta, epsilon, q: c3(4) };
        let spec = general_to_spec(&p).unwrap();
        for n in 0..=8 {
            assert_eq!(degree_condition(&spec, n), -general_condition(&p, n));
            assert_eq!(general_condition(&p, n), general_condition_factored(&p, n));
        }
    }

    #[test]
    fn fuchsian_violation() {
        let one = || s(rat(1));
        let p = GeneralHeunParams {
            a: s(rat(2)),
            alpha: one(),
            beta: one(),
            gamma: one(),
            delta: one(),
            epsilon: s(rat(2)),
            q: one(),
        };
        assert_eq!(general_to_spec(&p), Err(FuchsianViolation { residual: s(rat(-1)) }));
    }

    #[test]
    fn confluent_two_by_two() {
        // with nu = -alpha - mu, det = mu (mu - (gamma + beta - alpha + 2)) - alpha (alpha - 1)
        let (alpha, beta, gamma) = (rat(3), ratio(1, 2), rat(-2));
        let mu = Scalar::x();
        let p = ConfluentHeunParams {
            alpha: s(alpha.clone()),
            beta: s(beta.clone()),
            gamma: s(gamma.clone()),
            mu: mu.clone(),
            nu: -(mu.clone() + &s(alpha.clone())),
        };
        let spec = confluent_to_spec(&p);
        let expect = &mu * &(mu.clone() - &s(gamma + &beta - &alpha + rat(2))) - &s(&alpha * (&alpha - rat(1)));
        assert_eq!(delta_determinant(&spec, 1), expect);
        let m = build_criterion_matrix(&spec, 3);
        assert_eq!(m.get(0, 0), &mu);
        assert_eq!(m.get(0, 1), &s(alpha - rat(1)));
    }

    #[test]
    fn biconfluent_corner_and_zero_degree() {
        let (alpha, beta) = (rat(2), rat(3));
        let delta = Scalar::x();
        let p = BiconfluentHeunParams {
            alpha: s(alpha.clone()),
            beta: s(beta.clone()),
            gamma: s(&alpha + rat(2)),
            delta: delta.clone(),
        };
        let spec = biconfluent_to_spec(&p);
        let d = (delta + &s(rat(9))).scale(&ratio(1, 2));
        assert_eq!(delta_determinant(&spec, 0), d);
        let m = build_criterion_matrix(&spec, 2);
        assert_eq!(m.get(0, 1), &s(rat(-3)));
    }

    #[test]
    fn general_first_row() {
        let p = GeneralHeunParams {
            a: s(rat(3)),
            alpha: s(rat(-2)),
            beta: s(rat(5)),
            gamma: s(rat(2)),
            delta: s(rat(1)),
            epsilon: s(rat(1)),
            q: Scalar::x(),
        };
        let m = build_criterion_matrix(&general_to_spec(&p).unwrap(), 2);
        assert_eq!(m.get(0, 0), &Scalar::x());
        assert_eq!(m.get(0, 1), &s(rat(-6)));
    }

    fn pos(ms: &[TableMismatch<Q3>]) -> Vec<(usize, usize)> {
        ms.iter().map(|m| (m.row, m.col)).collect()
    }

    #[test]
    fn confluent_listed_rows() {
        // alpha, beta, mu symbolic; nu fixed by the degree condition
        let n = 5;
        let (alpha, beta, mu) = vars3();
        let nu = -(mu.clone() + &(c3(n as i64) * &alpha));
        let p = ConfluentHeunParams { alpha: alpha.clone(), beta, gamma: c3(7), mu, nu };
        let m = build_criterion_matrix(&confluent_to_spec(&p), n);
        let bad = listed_mismatches(&m, &confluent_listed_entries(&p, n));
        assert_eq!(pos(&bad), vec![(1, 2), (2, 3)]);
        assert_eq!(bad[0].generated, c3(2) * &alpha);
        assert_eq!(bad[1].generated, c3(3) * &(alpha + &c3(1)));
    }

    #[test]
    fn biconfluent_listed_rows() {
        let n = 6;
        let (alpha, beta, delta) = vars3();
        let gamma = alpha.clone() + &c3(2 * (n as i64 + 1));
        let p = BiconfluentHeunParams { alpha, beta: beta.clone(), gamma, delta };
        let m = build_criterion_matrix(&biconfluent_to_spec(&p), n);
        let bad = listed_mismatches(&m, &biconfluent_listed_entries(&p, n));
        assert_eq!(pos(&bad), vec![(n - 1, n - 1), (n, n)]);
        let d = m.get(0, 0).clone();
        assert_eq!(bad[0].generated, d.clone() + &(c3(n as i64 - 1) * &beta));
        assert_eq!(bad[1].generated, d + &(c3(n as i64) * &beta));
    }

    #[test]
    fn general_listed_rows() {
        let n = 4;
        let (a, gamma, delta) = vars3();
        let (alpha, beta) = (c3(-(n as i64)), c3(5));
        let epsilon = c3(1) + &alpha + &beta - &gamma - &delta;
        let p = GeneralHeunParams { a: a.clone(), alpha, beta, gamma: gamma.clone(), delta, epsilon, q: c3(11) };
        let m = build_criterion_matrix(&general_to_spec(&p).unwrap(), n);
        let bad = listed_mismatches(&m, &general_listed_entries(&p, n));
        assert_eq!(pos(&bad), vec![(2, 3), (n, n)]);
        assert_eq!(bad[0].generated, -(c3(3) * &a * &(c3(2) + &gamma)));
    }

    #[test]
    fn from_json_families() {
        let (spec, cond) = heun_from_json(
            HeunFamily::Biconfluent,
            r#"{"alpha": 1, "beta": 2, "gamma": 7, "delta": {"d": [0, 1]}}"#,
            2,
        )
        .unwrap();
        assert!(cond.is_zero());
        assert_eq!(spec.unknown(), "d");
        let bad = r#"{"a": 2, "alpha": 1, "beta": 1, "gamma": 1, "delta": 1, "epsilon": 2, "q": 1}"#;
        assert!(heun_from_json(HeunFamily::General, bad, 1).is_err());
        assert_eq!(HeunFamily::parse("confluent"), Some(HeunFamily::Confluent));
        assert_eq!(HeunFamily::parse("triconfluent"), None);
    }
}
