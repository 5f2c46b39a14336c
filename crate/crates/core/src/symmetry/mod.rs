//! Deck transformations of affine type and the objects built from them:
//! scaling laws, periods, invariant primitives, leaf holonomy, and the
//! positivity-splitting basis of a finite function space.

mod basis;
mod equivariance;
mod holonomy;
mod periods;
mod witness;

use thiserror::Error;

use crate::linalg::MatrixError;
use crate::model::ModelError;
use crate::pseudo_linear::LinearError;
use crate::scalar::ScalarError;

pub use basis::{
    basis_construct, random_closed_space, BasisConstruction, GeometricMean, Pi, Product, Radical,
    SampledFunctionSpace,
};
pub use equivariance::{chain_law, check_equivariance, scaling_residual, ChainLaw, LawResidual, Membership};
pub use holonomy::{holonomy_group, AffineMap, HolonomyClass, HolonomyReport};
pub use periods::{
    adaptive_simpson, construct_invariant_primitive, integrate, period_integral, primitive_at, InvariantPrimitive,
    Period, PeriodMethod, ORBIT_SAMPLES, PERIOD_TOL, QUADRATURE_TOL,
};
pub use witness::{verify_isometry, IsometryWitness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error("multiplier q = {0} must be positive")]
    NonPositiveMultiplier(String),
    #[error("map leaves the interval: {0}")]
    ImageOutside(String),
    #[error("witness does not act by an affine map of t")]
    NotAffineType,
    #[error("integrand is singular in the segment (near t = {0})")]
    SingularSegment(f64),
    #[error("nonzero period {0}: the class of χ dt does not vanish on the loop")]
    NonzeroPeriod(f64),
    #[error("space is not closed under abs: {0} is not in the span")]
    NotClosedUnderAbs(String),
    #[error("degenerate function space: {0}")]
    DegenerateSpace(String),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
