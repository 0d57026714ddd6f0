//! Spectral bifurcation data for the Dirichlet eigenvalue problem on the solid
//! cylinder `B₁ × ℝ` inside `𝕄ⁿ(k) × ℝ`.
//!
//! The crate computes the first Dirichlet eigenpair of the unit geodesic ball,
//! the dispersion relation `σ_j(T)` of the linearized Dirichlet-to-Neumann
//! operator on the mode `cos(jt)`, its zeros, the kernel structure at the
//! first sign-changing zero `T_*`, and first-order Delaunay-type profiles.
//! Every quantity has two evaluation routes: adaptive ODE shooting and closed
//! forms in associated Legendre / Ferrers functions, with an independent
//! finite-difference oracle on top.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command-line front end live in the `cylbif` crate.

#![no_std]
// Dev-dependencies enable `num-traits/std`, whose inherent float methods then
// shadow `num_traits::Float` and leave those imports unused in test builds.
#![allow(unused_imports)]
// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bifurcation;
pub mod dispersion;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
pub mod radial;
pub mod specfun;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::SpaceForm;
