//! Exact-arithmetic toolkit for finite-dimensional Poisson geometry.
//!
//! Layers, bottom up:
//!
//! - [`scalar`], [`poly`], [`relation`], [`numeric`]: Gaussian-rational
//!   scalars, Laurent/affine multivariate polynomials, single-relation
//!   normal forms and finite-difference gradients.
//! - [`linalg`]: exact rank, determinants, kernels over any field.
//! - [`lie`]: Lie algebras by structure constants, modules and
//!   Chevalley–Eilenberg cohomology.
//! - [`bialgebra`]: r-matrices, dual brackets, Lie bialgebra validation and
//!   Poisson–Lie structures on abelian groups.
//! - [`poisson`]: polynomial Poisson bivectors, Schouten calculus, rank
//!   stratification, Casimirs and Hamiltonian flows.
//! - [`action`]: linear Poisson actions, momentum maps and the
//!   equivariance obstruction.
//! - [`json`]: the JSON exchange formats.

pub mod action;
pub mod bialgebra;
pub mod exterior;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod numeric;
pub mod poisson;
pub mod poly;
pub mod relation;
pub mod sampling;
pub mod scalar;

pub use poly::{MultiPoly, Var, VarKind, VarSet};
pub use scalar::{q, qf, Rational, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("variable {name:?} declared both as {first} and {second}")]
    VarKindMismatch {
        name: String,
        first: &'static str,
        second: &'static str,
    },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not skew-symmetric: {0}")]
    NotSkew(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("group element violates its defining relation: {0}")]
    NotInGroup(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("symbolic operation needs an exact field")]
    NumericField,
}

pub type Result<T> = std::result::Result<T, Error>;
