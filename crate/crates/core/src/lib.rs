//! Degenerate solutions of the Dirac equation for massive particles.
//!
//! The crate builds the closed-form spinor families, the 4-potential families
//! they solve the Dirac equation for, the electromagnetic fields derived from
//! those potentials and the tunneling quantities of the associated barrier
//! problem. Every object carries exact analytic derivatives so the Dirac
//! residual `iγ^μ∂_μΨ + b_μγ^μΨ − mΨ` can be checked to machine precision.
//!
//! Conventions: natural units (ħ = c = 1), Dirac–Pauli gamma matrices,
//! metric signature (+,−,−,−), Gaussian units for E and B.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod em;
pub mod error;
pub mod numerics;
pub mod potentials;
pub mod residual;
pub mod sampling;
pub mod spinors;
pub mod symexpr;
pub mod tunneling;

pub use algebra::{Complex, Matrix4C, Spinor4};
pub use error::{Error, Result};
pub use symexpr::{ScalarExpr, SpacetimePoint, Var};
