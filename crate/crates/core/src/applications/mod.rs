//! Worked families routed through the generic criteria: the Davidson
//! oscillator, the shifted Coulomb problem, two literature equations and a
//! hypergeometric class whose coefficients depend on the degree.

mod coulomb;
mod davidson;
mod hyper;
mod literature;

use thiserror::Error;

use crate::criteria::CriteriaError;

pub use coulomb::{
    coulomb_coefficients, coulomb_constraint, coulomb_constraint_symbolic, coulomb_energy, coulomb_roots,
    coulomb_spec, normalize_constraint, CoulombProblem, CoulombRoot, CoulombShift,
};
pub use davidson::{davidson_eigenvalue, davidson_solution, davidson_spec};
pub use hyper::{hyper_build, hyper_residual, hyper_spec_l2, hyper_verify, HyperSolution, HyperVerification};
pub use literature::{chhajlany_analyze, chhajlany_spec, krylov_robnik_analyze, krylov_robnik_spec, KrylovRobnik};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApplicationError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(u32),
    #[error("shift must be positive")]
    NonPositiveShift,
    #[error("degree {n} is not a multiple of l - 1 = {step}")]
    BadDegree { n: usize, step: usize },
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(&'static str),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}
