use crate::criteria::{delta_determinant, EquationSpec, Scalar};
use crate::exactalg::{Rational, Ring};

/// `x^3 y'' + alpha (x^2 - 1) y' + (beta x + gamma) y = 0`.
pub fn krylov_robnik_spec(alpha: &Scalar, beta: &Scalar, gamma: &Scalar) -> EquationSpec {
    let z = Scalar::from_int(0);
    EquationSpec::from_operator(
        [Scalar::from_int(1), z.clone(), z.clone(), z.clone()],
        [alpha.clone(), z, -alpha.clone()],
        [beta.clone(), gamma.clone()],
    )
    .expect("y'' coefficient is nonzero")
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrylovRobnik {
    /// `-n^2 - (alpha - 1) n`.
    pub beta: Rational,
    /// Criterion determinant in `t = gamma`.
    pub constraint: Scalar,
}

pub fn krylov_robnik_analyze(alpha: &Rational, n: usize) -> KrylovRobnik {
    let nn = Rational::from_int(n as i64);
    let beta = -(&nn * &nn) - (alpha - Rational::from_int(1)) * &nn;
    let spec = krylov_robnik_spec(
        &Scalar::constant(alpha.clone()),
        &Scalar::constant(beta.clone()),
        &Scalar::x(),
    )
    .with_unknown("gamma");
    KrylovRobnik {
        beta,
        constraint: delta_determinant(&spec, n),
    }
}

/// `y'' + (p - 2x^2) y' + (delta x + alpha) y = 0`.
pub fn chhajlany_spec(p: &Scalar, delta: &Scalar, alpha: &Scalar) -> EquationSpec {
    let z = Scalar::from_int(0);
    EquationSpec::from_operator(
        [z.clone(), z.clone(), z.clone(), Scalar::from_int(1)],
        [Scalar::from_int(-2), z, p.clone()],
        [delta.clone(), alpha.clone()],
    )
    .expect("y'' coefficient is nonzero")
}

/// Criterion determinant in `t = alpha` with `delta = 2n`.
pub fn chhajlany_analyze(p: &Rational, n: usize) -> Scalar {
    let spec = chhajlany_spec(
        &Scalar::constant(p.clone()),
        &Scalar::from_int(2 * n as i64),
        &Scalar::x(),
    )
    .with_unknown("alpha");
    delta_determinant(&spec, n)
}
