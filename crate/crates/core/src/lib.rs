//! Verification laboratory for rank-one ECS (essentially conformally
//! symmetric) pseudo-Riemannian metrics of the Roter family
//! `g = κ dt² + dt ds + δ`, `κ(t, s, x) = f(t)⟨x, x⟩ + ⟨Ax, x⟩`.

pub mod curvature;
pub mod homogeneity;
pub mod lab;
pub mod linalg;
pub mod model;
pub mod pseudo_linear;
pub mod scalar;
pub mod series;
pub mod symmetry;
pub mod tensor;
