use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{common_denominator, format_rational, parse_rational};
use super::{AlgebraError, Field, Rational, Ring};

/// Degree of a polynomial; the zero polynomial has degree minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::MinusInfinity,
        }
    }
}

/// Dense univariate polynomial; `coeffs[i]` multiplies the i-th power.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial is
/// the empty vector and structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        UPoly {
            coeffs: vec![R::zero(), R::one()],
        }
    }

    pub fn monomial(c: R, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); degree + 1];
        coeffs[degree] = c;
        UPoly { coeffs }
    }

    /// `c0 + c1 * x`.
    pub fn linear(c0: R, c1: R) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| R::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Index of the lowest nonzero coefficient.
    pub fn lowest_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divide by `x^k`; the low coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, at: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * at + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * &R::from_int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Quotient `r` with `self = q * r`, computed by long division that only
    /// ever divides by the leading coefficient of `q`.
    pub fn exact_div(&self, q: &Self) -> Result<Self, AlgebraError> {
        let Some(lead) = q.leading() else {
            return Err(AlgebraError::DivideByZero);
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.coeffs.len() < q.coeffs.len() {
            return Err(AlgebraError::NotDivisible);
        }
        let dq = q.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![R::zero(); self.coeffs.len() - dq];
        for i in (0..quot.len()).rev() {
            if rem[i + dq].is_zero() {
                continue;
            }
            let qc = rem[i + dq]
                .exact_div(lead)
                .map_err(|_| AlgebraError::NotDivisible)?;
            for (j, qj) in q.coeffs.iter().enumerate() {
                let cur = std::mem::replace(&mut rem[i + j], R::zero());
                rem[i + j] = cur - &(qc.clone() * qj);
            }
            quot[i] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NotDivisible);
        }
        Ok(Self::new(quot))
    }
}

impl<F: Field> UPoly<F> {
    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let Some(lead) = d.leading() else {
            return Err(AlgebraError::DivideByZero);
        };
        let lead_inv = lead.inv().ok_or(AlgebraError::DivideByZero)?;
        if self.coeffs.len() < d.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); self.coeffs.len() - dd];
        for i in (0..quot.len()).rev() {
            if rem[i + dd].is_zero() {
                continue;
            }
            let qc = rem[i + dd].clone() * &lead_inv;
            for (j, dj) in d.coeffs.iter().enumerate() {
                let cur = std::mem::replace(&mut rem[i + j], F::zero());
                rem[i + j] = cur - &(qc.clone() * dj);
            }
            quot[i] = qc;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(|l| l.inv()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free_part(&self) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides its argument")
    }
}

impl<F: Field> UPoly<UPoly<F>> {
    /// Greatest common divisor of the coefficients, monic.
    pub fn content(&self) -> UPoly<F> {
        self.coeffs
            .iter()
            .fold(UPoly::zero(), |g, c| g.gcd(c))
    }
}

impl UPoly<Rational> {
    /// Scalar multiple with coprime integer coefficients and positive leading
    /// coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let ints = self.integer_coeffs();
        Self::new(ints.into_iter().map(Rational::from_integer).collect())
    }

    /// Coefficients of [`primitive`](Self::primitive) as integers.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = common_denominator(&self.coeffs);
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let flip = ints.last().is_some_and(|l| l.is_negative());
        for c in ints.iter_mut() {
            *c = &*c / &g;
            if flip {
                *c = -&*c;
            }
        }
        ints
    }

    pub fn to_string_in(&self, var: &str) -> String {
        format_terms(
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone())),
            var,
        )
    }
}

impl UPoly<UPoly<Rational>> {
    /// Render with the outer indeterminate `outer` and coefficients in `inner`.
    pub fn to_string_in(&self, outer: &str, inner: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = c.to_string_in(inner);
            let power = match i {
                0 => String::new(),
                1 => outer.to_string(),
                _ => format!("{outer}^{i}"),
            };
            parts.push(match (i, c.coeffs.len()) {
                (0, _) => format!("({coeff})"),
                (_, 1) if c.coeffs[0].is_one() => power,
                _ => format!("({coeff}){power}"),
            });
        }
        parts.join(" + ")
    }
}

fn format_terms(terms: impl Iterator<Item = (usize, Rational)>, var: &str) -> String {
    let mut out = String::new();
    for (i, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let power = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&power);
        } else if mag.is_integer() {
            out.push_str(&format!("{}{power}", format_rational(&mag)));
        } else {
            out.push_str(&format!("({}){power}", format_rational(&mag)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for UPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl<R: fmt::Debug> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("UPoly").field(&self.coeffs).finish()
    }
}

impl<R: Ring> Zero for UPoly<R> {
    fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for UPoly<R> {
    fn one() -> Self {
        UPoly {
            coeffs: vec![R::one()],
        }
    }
}

fn add_coeffs<R: Ring>(a: &[R], b: &[R], negate_b: bool) -> Vec<R> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(R::zero);
            match b.get(i) {
                Some(y) if negate_b => x - y,
                Some(y) => x + y,
                None => x,
            }
        })
        .collect()
}

fn mul_coeffs<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![R::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let cur = std::mem::replace(&mut out[i + j], R::zero());
            out[i + j] = cur + &(ai.clone() * bj);
        }
    }
    out
}

impl<R: Ring> Add<&UPoly<R>> for &UPoly<R> {
    type Output = UPoly<R>;
    fn add(self, rhs: &UPoly<R>) -> UPoly<R> {
        UPoly::new(add_coeffs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl<R: Ring> Sub<&UPoly<R>> for &UPoly<R> {
    type Output = UPoly<R>;
    fn sub(self, rhs: &UPoly<R>) -> UPoly<R> {
        UPoly::new(add_coeffs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl<R: Ring> Mul<&UPoly<R>> for &UPoly<R> {
    type Output = UPoly<R>;
    fn mul(self, rhs: &UPoly<R>) -> UPoly<R> {
        UPoly::new(mul_coeffs(&self.coeffs, &rhs.coeffs))
    }
}

impl<R: Ring> Neg for &UPoly<R> {
    type Output = UPoly<R>;
    fn neg(self) -> UPoly<R> {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<R: Ring> Neg for UPoly<R> {
    type Output = UPoly<R>;
    fn neg(self) -> UPoly<R> {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<R: Ring> $tr<&UPoly<R>> for UPoly<R> {
            type Output = UPoly<R>;
            fn $method(self, rhs: &UPoly<R>) -> UPoly<R> {
                (&self).$method(rhs)
            }
        }

        impl<R: Ring> $tr<UPoly<R>> for UPoly<R> {
            type Output = UPoly<R>;
            fn $method(self, rhs: UPoly<R>) -> UPoly<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<R: Ring> Ring for UPoly<R> {
    fn from_int(n: i64) -> Self {
        Self::constant(R::from_int(n))
    }

    fn exact_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        UPoly::exact_div(self, rhs)
    }
}

impl Serialize for UPoly<Rational> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for UPoly<Rational> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = UPoly<Rational>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of rational strings in ascending power order")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(s) = seq.next_element::<RationalRepr>()? {
                    coeffs.push(s.0);
                }
                Ok(UPoly::new(coeffs))
            }
        }

        deserializer.deserialize_seq(PolyVisitor)
    }
}

/// Accepts `"p/q"`, `"p"` or a JSON integer.
pub(crate) struct RationalRepr(pub Rational);

impl<'de> Deserialize<'de> for RationalRepr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl<'de> Visitor<'de> for RatVisitor {
            type Value = RationalRepr;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_rational(v).map(RationalRepr).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(RationalRepr(Rational::from_integer(BigInt::from(v))))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(RationalRepr(Rational::from_integer(BigInt::from(v))))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    type P = UPoly<Rational>;

    fn p(c: &[i64]) -> P {
        P::from_ints(c)
    }

    #[test]
    fn addition_examples() {
        assert!((p(&[1, 1]) + p(&[-1, -1])).is_zero());
        assert_eq!(p(&[2, 2]) + P::zero(), p(&[2, 2]));
        assert_eq!(p(&[0, 0, 1]) + p(&[2, 2]), p(&[2, 2, 1]));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(p(&[-1, 1]) * p(&[0, 1]), p(&[0, -1, 1]));
        assert_eq!(p(&[0, 6]) * p(&[2, 2]), p(&[0, 12, 12]));
        assert!((p(&[3, 1, 4]) * P::zero()).is_zero());
        assert_eq!(
            (p(&[1, 2]) * p(&[3, 0, 1])).degree(),
            p(&[1, 2]).degree() + p(&[3, 0, 1]).degree()
        );
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[2, 2]).derivative(), p(&[2]));
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
        assert!(p(&[7]).derivative().is_zero());
        assert!(P::zero().derivative().is_zero());
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[4, 12, 12]).exact_div(&p(&[4])).unwrap(), p(&[1, 3, 3]));
        assert_eq!(
            p(&[1, 0, 1]).exact_div(&p(&[-1, 1])),
            Err(AlgebraError::NotDivisible)
        );
        assert_eq!(p(&[1]).exact_div(&P::zero()), Err(AlgebraError::DivideByZero));
        assert_eq!(
            p(&[1, 1]).exact_div(&p(&[0, 0, 1])),
            Err(AlgebraError::NotDivisible)
        );
    }

    #[test]
    fn zero_polynomial_is_canonical() {
        let z = P::new(vec![rat(0), rat(0)]);
        assert_eq!(z, P::zero());
        assert!(z.coeffs().is_empty());
        assert_eq!(z.degree(), Degree::MinusInfinity);
        assert!(Degree::MinusInfinity < Degree::Finite(0));
    }

    #[test]
    fn gcd_and_square_free() {
        let a = p(&[-1, 0, 1]); // (x-1)(x+1)
        let b = p(&[1, -2, 1]); // (x-1)^2
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let sq = p(&[0, 0, 1]);
        assert_eq!(sq.square_free_part(), p(&[0, 1]));
        let f = &b * &p(&[2, 1]);
        let sf = f.square_free_part();
        assert!(sf.gcd(&sf.derivative()).is_constant());
    }

    #[test]
    fn primitive_normalization() {
        let q = P::new(vec![ratio(-1, 2), rat(0), ratio(-3, 4)]);
        assert_eq!(q.primitive(), p(&[2, 0, 3]));
        assert_eq!(p(&[4, 6]).primitive(), p(&[2, 3]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-3, 0, 2]).to_string(), "2x^2 - 3");
        assert_eq!(p(&[0, -1]).to_string_in("t"), "-t");
        assert_eq!(P::new(vec![rat(1), ratio(1, 2)]).to_string(), "(1/2)x + 1");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn nested_exact_division() {
        // (t + k)(t - k) / (t - k) over Q[k][t]
        let k = UPoly::<Rational>::x();
        let t_plus_k = UPoly::new(vec![k.clone(), UPoly::one()]);
        let t_minus_k = UPoly::new(vec![-k.clone(), UPoly::one()]);
        let prod = &t_plus_k * &t_minus_k;
        assert_eq!(prod.exact_div(&t_minus_k).unwrap(), t_plus_k);
        let two_k = UPoly::constant(k.scale(&rat(2)));
        assert_eq!(
            UPoly::constant(k.clone()).exact_div(&two_k).unwrap(),
            UPoly::constant(UPoly::constant(ratio(1, 2)))
        );
        // k does not divide 1 in Q[k]
        assert!(UPoly::<UPoly<Rational>>::one()
            .exact_div(&UPoly::constant(k))
            .is_err());
    }

    #[test]
    fn serde_round_trip() {
        let q = P::new(vec![ratio(-1, 2), rat(0), rat(3)]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["-1/2","0","3"]"#);
        let back: P = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        let ints: P = serde_json::from_str("[1, -2, 0]").unwrap();
        assert_eq!(ints, p(&[1, -2]));
    }
}
