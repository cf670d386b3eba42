//! Semiclassical tunneling from a non-homogeneous quantum wire through a
//! triangular barrier.
//!
//! The crate solves the complex saddle equation of the Hamilton-Jacobi general
//! integral, tracks wave-function branches by continuation, locates the fold
//! and cusp geometry, and computes penetration exponents along imaginary-time
//! trajectories. One-dimensional scattering oracles and an impurity
//! perturbation module complete the toolkit.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cmath;
pub mod critical;
pub mod error;
pub mod hj;
pub mod impurity;
pub mod jet;
pub mod oned;
pub mod potential;
pub mod quadrature;
pub mod trajectory;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use potential::{BarrierParams, ImpurityParams, PhysicalParams};

/// Solver version stamped into every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
