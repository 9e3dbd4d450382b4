//! Harmonic function spaces on the unit ball and the upper half-space:
//! kernels, coefficient multipliers, mixed norms and distance functionals,
//! with the quadrature needed to evaluate them.

pub mod distance;
pub mod error;
pub mod harmonic_fn;
pub mod kernels;
pub mod multipliers;
pub mod norms;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod spharm;

pub use error::{Error, Result};
