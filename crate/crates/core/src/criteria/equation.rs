use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::{CriteriaError, Scalar};
use crate::exactalg::{format_rational, Rational, RationalRepr, Ring, UPoly};

/// Coefficient tuple of
/// `(a30 x^3 + a31 x^2 + a32 x + a33) y'' + (a20 x^2 + a21 x + a22) y' - (tau10 x + tau11) y = 0`.
///
/// Note the minus sign in front of the `y` term. Sources written with `+`
/// go through [`EquationSpec::from_operator`], which negates once here so that
/// adapters never do it by hand.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationSpec<R = Scalar> {
    a3: [R; 4],
    a2: [R; 3],
    tau: [R; 2],
    unknown: String,
}

impl<R: Ring> EquationSpec<R> {
    /// Coefficients in descending powers of `x`, `tau` with the minus-sign
    /// convention.
    pub fn new(a3: [R; 4], a2: [R; 3], tau: [R; 2]) -> Result<Self, CriteriaError> {
        if a3.iter().chain(a2.iter()).all(|c| c.is_zero()) {
            return Err(CriteriaError::NotSecondOrder);
        }
        Ok(EquationSpec {
            a3,
            a2,
            tau,
            unknown: "t".to_string(),
        })
    }

    /// Build from `second y'' + first y' + zeroth y = 0`, each list in
    /// descending powers of `x`.
    pub fn from_operator(second: [R; 4], first: [R; 3], zeroth: [R; 2]) -> Result<Self, CriteriaError> {
        let [z0, z1] = zeroth;
        Self::new(second, first, [-z0, -z1])
    }

    pub fn a3(&self) -> &[R; 4] {
        &self.a3
    }

    pub fn a2(&self) -> &[R; 3] {
        &self.a2
    }

    pub fn tau(&self) -> &[R; 2] {
        &self.tau
    }

    /// `y''` coefficient as a polynomial in `x`.
    pub fn second_poly(&self) -> UPoly<R> {
        UPoly::new(self.a3.iter().rev().cloned().collect())
    }

    /// `y'` coefficient as a polynomial in `x`.
    pub fn first_poly(&self) -> UPoly<R> {
        UPoly::new(self.a2.iter().rev().cloned().collect())
    }

    /// `tau10 x + tau11`, i.e. minus the `y` coefficient.
    pub fn tau_poly(&self) -> UPoly<R> {
        UPoly::new(self.tau.iter().rev().cloned().collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> EquationSpec<S> {
        EquationSpec {
            a3: [f(&self.a3[0]), f(&self.a3[1]), f(&self.a3[2]), f(&self.a3[3])],
            a2: [f(&self.a2[0]), f(&self.a2[1]), f(&self.a2[2])],
            tau: [f(&self.tau[0]), f(&self.tau[1])],
            unknown: self.unknown.clone(),
        }
    }

    fn coefficients(&self) -> impl Iterator<Item = &R> {
        self.a3.iter().chain(self.a2.iter()).chain(self.tau.iter())
    }
}

/// Rational `(P3, P2, P1)` of a parameter-free equation.
pub type NumericPolys = (UPoly<Rational>, UPoly<Rational>, UPoly<Rational>);

impl EquationSpec<Scalar> {
    pub fn numeric(a3: [Rational; 4], a2: [Rational; 3], tau: [Rational; 2]) -> Result<Self, CriteriaError> {
        Self::new(a3.map(Scalar::constant), a2.map(Scalar::constant), tau.map(Scalar::constant))
    }

    pub fn from_ints(a3: [i64; 4], a2: [i64; 3], tau: [i64; 2]) -> Result<Self, CriteriaError> {
        let c = |v: i64| Scalar::constant(Rational::from_int(v));
        Self::new(a3.map(c), a2.map(c), tau.map(c))
    }

    /// Name used for the unknown parameter in JSON and reports.
    pub fn unknown(&self) -> &str {
        &self.unknown
    }

    pub fn with_unknown(mut self, name: impl Into<String>) -> Self {
        self.unknown = name.into();
        self
    }

    pub fn is_numeric(&self) -> bool {
        self.coefficients().all(|c| c.is_constant())
    }

    /// Every coefficient has degree at most one in the unknown.
    pub fn check_linear_in_unknown(&self) -> Result<(), CriteriaError> {
        if self.coefficients().all(|c| c.coeffs().len() <= 2) {
            Ok(())
        } else {
            Err(CriteriaError::NonlinearUnknown)
        }
    }

    /// Fix the unknown parameter at `value`.
    pub fn substitute(&self, value: &Rational) -> EquationSpec<Scalar> {
        self.map(|c| Scalar::constant(c.eval(value)))
    }

    /// `(P3, P2, P1)` in `x` for a numeric equation, with `P1 = tau10 x + tau11`.
    pub fn numeric_polys(&self) -> Result<NumericPolys, CriteriaError> {
        if !self.is_numeric() {
            return Err(CriteriaError::Parametric);
        }
        let numeric = self.map(|c| c.coeff(0));
        Ok((numeric.second_poly(), numeric.first_poly(), numeric.tau_poly()))
    }

    pub fn from_json(text: &str) -> Result<Self, CriteriaError> {
        serde_json::from_str(text).map_err(|e| CriteriaError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("equation serializes")
    }
}

fn scalar_to_value(c: &Scalar, unknown: &str) -> Value {
    if c.is_constant() {
        Value::String(format_rational(&c.coeff(0)))
    } else {
        let coeffs = c.coeffs().iter().map(|r| Value::String(format_rational(r))).collect();
        let mut map = serde_json::Map::new();
        map.insert(unknown.to_string(), Value::Array(coeffs));
        Value::Object(map)
    }
}

impl Serialize for EquationSpec<Scalar> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let u = self.unknown.as_str();
        let mut map = serde_json::Map::new();
        let list = |cs: &[Scalar]| Value::Array(cs.iter().map(|c| scalar_to_value(c, u)).collect());
        map.insert("a3".into(), list(&self.a3));
        map.insert("a2".into(), list(&self.a2));
        map.insert("tau".into(), list(&self.tau));
        map.insert("unknown".into(), Value::String(u.to_string()));
        Value::Object(map).serialize(serializer)
    }
}

/// One coefficient in JSON: a rational literal, or `{"t": ["c0", "c1"]}` for
/// `c0 + c1 t` (the key is the unknown's name).
#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Literal(RationalRepr),
    Param(BTreeMap<String, Vec<RationalRepr>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationRepr {
    a3: [ScalarRepr; 4],
    a2: [ScalarRepr; 3],
    tau: [ScalarRepr; 2],
    #[serde(default)]
    unknown: Option<String>,
}

/// Resolve one raw coefficient into a polynomial in the unknown, adding the
/// unknown's name to `names` when one appears.
fn resolve_scalar(raw: ScalarRepr, names: &mut BTreeSet<String>) -> Result<Scalar, String> {
    match raw {
        ScalarRepr::Literal(v) => Ok(Scalar::constant(v.0)),
        ScalarRepr::Param(map) => {
            if map.len() != 1 {
                return Err("a parametric coefficient must have exactly one key".into());
            }
            let (name, coeffs) = map.into_iter().next().expect("one entry");
            if coeffs.is_empty() || coeffs.len() > 2 {
                return Err(format!(
                    "coefficient in {name:?} must list 1 or 2 values (c0, c1 for c0 + c1*{name})"
                ));
            }
            names.insert(name);
            Ok(Scalar::new(coeffs.into_iter().map(|c| c.0).collect()))
        }
    }
}

fn resolve_scalars<const N: usize>(raw: [ScalarRepr; N], names: &mut BTreeSet<String>) -> Result<[Scalar; N], String> {
    let out = raw
        .into_iter()
        .map(|r| resolve_scalar(r, names))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(out.try_into().expect("length preserved"))
}

/// Reads the named fields of a JSON object, each in the coefficient format
/// (`"p/q"`, an integer, or `{"t": ["c0", "c1"]}`). An optional `"unknown"`
/// key names the parameter. Returns the scalars in `fields` order and the
/// unknown's name.
pub fn scalars_from_json(text: &str, fields: &[&str]) -> Result<(Vec<Scalar>, String), CriteriaError> {
    let json = |m: String| CriteriaError::Json(m);
    let mut obj: serde_json::Map<String, Value> = serde_json::from_str(text).map_err(|e| json(e.to_string()))?;
    let declared = match obj.remove("unknown") {
        None => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => return Err(json("\"unknown\" must be a string".into())),
    };
    let mut names = BTreeSet::new();
    let mut out = Vec::with_capacity(fields.len());
    for f in fields {
        let v = obj.remove(*f).ok_or_else(|| json(format!("missing field {f:?}")))?;
        let raw: ScalarRepr = serde_json::from_value(v).map_err(|e| json(format!("field {f:?}: {e}")))?;
        out.push(resolve_scalar(raw, &mut names).map_err(|e| json(format!("field {f:?}: {e}")))?);
    }
    if let Some(extra) = obj.keys().next() {
        return Err(json(format!("unknown field {extra:?}; expected {fields:?}")));
    }
    let unknown = settle_unknown(names, declared)?;
    Ok((out, unknown))
}

/// Checks that at most one unknown name was used and that it agrees with any
/// declared name.
fn settle_unknown(
    names: BTreeSet<String>,
    declared: Option<String>,
) -> Result<String, CriteriaError> {
    if names.len() > 1 {
        return Err(CriteriaError::MultipleUnknowns(names.into_iter().collect()));
    }
    match (names.into_iter().next(), declared) {
        (Some(used), Some(decl)) if used != decl => Err(CriteriaError::MultipleUnknowns(vec![used, decl])),
        (Some(used), _) => Ok(used),
        (None, Some(decl)) => Ok(decl),
        (None, None) => Ok("t".to_string()),
    }
}

impl<'de> Deserialize<'de> for EquationSpec<Scalar> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = EquationRepr::deserialize(deserializer)?;
        let mut names = BTreeSet::new();
        let a3 = resolve_scalars(repr.a3, &mut names).map_err(D::Error::custom)?;
        let a2 = resolve_scalars(repr.a2, &mut names).map_err(D::Error::custom)?;
        let tau = resolve_scalars(repr.tau, &mut names).map_err(D::Error::custom)?;
        let unknown = settle_unknown(names, repr.unknown).map_err(D::Error::custom)?;
        let eq = EquationSpec::new(a3, a2, tau).map_err(D::Error::custom)?;
        Ok(eq.with_unknown(unknown))
    }
}

impl<R: Ring> EquationSpec<R> {
    /// `P2 = P1 = 0`: the equation reduces to `P3 y'' = 0`.
    pub fn is_pure_second_derivative(&self) -> bool {
        self.a2.iter().chain(self.tau.iter()).all(Zero::is_zero)
    }
}
