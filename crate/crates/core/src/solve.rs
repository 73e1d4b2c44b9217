//! Real roots of a polynomial in one unknown: Sturm-certified isolation,
//! bisection refinement, and exact detection of rational roots.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exactalg::rational::{from_f64, simplest_between, to_f64};
use crate::exactalg::{format_rational, Rational, UPoly};

type Poly = UPoly<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("interval does not isolate exactly one root")]
    NotIsolating,
    #[error("search interval is empty")]
    EmptyInterval,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// `p, p', -rem(p, p'), ...` down to a nonzero constant or the gcd.
pub fn sturm_chain(p: &Poly) -> Result<Vec<Poly>, SolveError> {
    if p.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let mut chain = vec![p.clone()];
    let mut next = p.derivative();
    while !next.is_zero() {
        let (_, r) = chain.last().expect("nonempty").div_rem(&next).expect("nonzero divisor");
        chain.push(next);
        next = -r;
    }
    Ok(chain)
}

fn variations(chain: &[Poly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in chain {
        let v = q.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Distinct real roots in the half-open interval `(lo, hi]`.
pub fn count_roots(chain: &[Poly], lo: &Rational, hi: &Rational) -> usize {
    variations(chain, lo).saturating_sub(variations(chain, hi))
}

/// `1 + max |c_i / lead|`: every root lies strictly inside `(-b, b)`.
pub fn cauchy_bound(p: &Poly) -> Rational {
    let Some(lead) = p.leading() else {
        return Rational::one();
    };
    let deg = p.coeffs().len() - 1;
    let m = p.coeffs()[..deg]
        .iter()
        .map(|c| (c / lead).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Search half-width: `max(10^6, cauchy_bound(p))`.
pub fn default_range(p: &Poly) -> Rational {
    cauchy_bound(p).max(Rational::from_integer(BigInt::from(1_000_000)))
}

/// Disjoint intervals `[lo, hi]`, each holding exactly one root of the
/// square-free part of `p`, with the polynomial nonzero at both endpoints.
/// Roots exactly at the search endpoints are not reported.
pub fn isolate_real_roots(p: &Poly, lo: &Rational, hi: &Rational) -> Result<Vec<(Rational, Rational)>, SolveError> {
    if p.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(SolveError::EmptyInterval);
    }
    let sf = p.square_free_part();
    let chain = sturm_chain(&sf)?;
    let mut out = Vec::new();
    // (a, b] with known root count; roots at `hi` are excluded up front.
    let top = if sf.eval(hi).is_zero() { shrink_below(&chain, &sf, lo, hi) } else { hi.clone() };
    let mut stack = vec![(lo.clone(), top.clone(), count_roots(&chain, lo, &top))];
    while let Some((a, b, k)) = stack.pop() {
        match k {
            0 => {}
            1 => out.push(tighten(&chain, &sf, a, b)),
            _ => {
                let m = (&a + &b) / Rational::from_integer(2.into());
                let left = count_roots(&chain, &a, &m);
                stack.push((m.clone(), b, k - left));
                stack.push((a, m, left));
            }
        }
    }
    out.sort();
    Ok(out)
}

// A point just below `b` such that `(lo, point]` drops exactly the root at `b`.
fn shrink_below(chain: &[Poly], sf: &Poly, lo: &Rational, b: &Rational) -> Rational {
    let mut w = (b - lo) / Rational::from_integer(2.into());
    loop {
        let c = b - &w;
        if count_roots(chain, &c, b) == 1 && !sf.eval(&c).is_zero() {
            return c;
        }
        w /= Rational::from_integer(2.into());
    }
}

// Narrow `(a, b]` holding one root until neither endpoint is a root.
fn tighten(chain: &[Poly], sf: &Poly, mut a: Rational, mut b: Rational) -> (Rational, Rational) {
    let two = Rational::from_integer(2.into());
    loop {
        let fa = sf.eval(&a).is_zero();
        if sf.eval(&b).is_zero() {
            // the root is b itself; center a small interval on it
            let mut w = (&b - &a) / &two;
            loop {
                let (l, h) = (&b - &w, &b + &w);
                if count_roots(chain, &l, &h) == 1 && !sf.eval(&l).is_zero() && !sf.eval(&h).is_zero() {
                    return (l, h);
                }
                w /= &two;
            }
        }
        if !fa {
            return (a, b);
        }
        let m = (&a + &b) / &two;
        if count_roots(chain, &a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
}

/// Bisects an isolating interval of `p` until narrower than `tolerance` and
/// returns the midpoint. Repeated factors are removed first.
pub fn refine_root(p: &Poly, interval: &(Rational, Rational), tolerance: f64) -> Result<f64, SolveError> {
    let (lo, hi) = refine_interval(p, interval, tolerance)?;
    Ok(to_f64(&((&lo + &hi) / Rational::from_integer(2.into()))))
}

fn refine_interval(
    p: &Poly,
    interval: &(Rational, Rational),
    tolerance: f64,
) -> Result<(Rational, Rational), SolveError> {
    if p.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let sf = p.square_free_part();
    let chain = sturm_chain(&sf)?;
    let (a, b) = interval;
    if count_roots(&chain, a, b) != 1 || sf.eval(a).is_zero() {
        return Err(SolveError::NotIsolating);
    }
    let tol = from_f64(tolerance.abs())
        .filter(|t| !t.is_zero())
        .unwrap_or_else(|| from_f64(DEFAULT_TOLERANCE).expect("finite"));
    Ok(refine_exact(&sf, interval, &tol))
}

/// Isolating intervals, refined approximations and exactly rational roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootReport {
    pub polynomial: Poly,
    pub intervals: Vec<(Rational, Rational)>,
    pub roots: Vec<f64>,
    pub exact: Vec<Rational>,
    /// Roots of the square-free part that are not real.
    pub complex_count: usize,
}

impl RootReport {
    pub fn empty(polynomial: Poly) -> Self {
        RootReport {
            polynomial,
            intervals: Vec::new(),
            roots: Vec::new(),
            exact: Vec::new(),
            complex_count: 0,
        }
    }
}

impl Serialize for RootReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let intervals: Vec<[String; 2]> = self
            .intervals
            .iter()
            .map(|(a, b)| [format_rational(a), format_rational(b)])
            .collect();
        let exact: Vec<String> = self.exact.iter().map(format_rational).collect();
        let mut s = serializer.serialize_struct("RootReport", 3)?;
        s.serialize_field("intervals", &intervals)?;
        s.serialize_field("roots", &self.roots)?;
        s.serialize_field("exact", &exact)?;
        s.end()
    }
}

/// Exact root inside an isolating interval when it is rational.
fn rational_root_in(sf: &Poly, interval: &(Rational, Rational)) -> Option<Rational> {
    // Rational roots of the primitive form have denominators dividing `lead`;
    // two such values differ by at least 1/lead^2.
    let ints = sf.integer_coeffs();
    let lead = Rational::from_integer(ints.last().expect("nonzero").abs());
    let width = Rational::one() / (&lead * &lead * Rational::from_integer(2.into()));
    let (a, b) = interval;
    let narrow = if b - a < width {
        (a.clone(), b.clone())
    } else {
        refine_exact(sf, interval, &width)
    };
    let cand = simplest_between(&narrow.0, &narrow.1);
    sf.eval(&cand).is_zero().then_some(cand)
}

fn refine_exact(sf: &Poly, interval: &(Rational, Rational), width: &Rational) -> (Rational, Rational) {
    let (mut a, mut b) = interval.clone();
    let two = Rational::from_integer(2.into());
    let sign_a = sf.eval(&a).is_positive();
    while &b - &a >= *width {
        let m = (&a + &b) / &two;
        let fm = sf.eval(&m);
        if fm.is_zero() {
            return (m.clone(), m);
        }
        if fm.is_positive() == sign_a {
            a = m;
        } else {
            b = m;
        }
    }
    (a, b)
}

/// All real roots of `p` within the default search range.
pub fn find_real_roots(p: &Poly, tolerance: f64) -> Result<RootReport, SolveError> {
    if p.is_zero() {
        return Err(SolveError::ZeroPolynomial);
    }
    let r = default_range(p);
    let intervals = isolate_real_roots(p, &-r.clone(), &r)?;
    let sf = p.square_free_part();
    let mut roots = Vec::with_capacity(intervals.len());
    let mut exact = Vec::new();
    for iv in &intervals {
        match rational_root_in(&sf, iv) {
            Some(q) => {
                roots.push(to_f64(&q));
                exact.push(q);
            }
            None => roots.push(refine_root(&sf, iv, tolerance)?),
        }
    }
    let complex_count = (sf.coeffs().len() - 1) - intervals.len();
    Ok(RootReport {
        polynomial: p.clone(),
        intervals,
        roots,
        exact,
        complex_count,
    })
}
