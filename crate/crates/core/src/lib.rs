//! Simulation toolkit for PAC sample complexity with and without knowledge
//! of the unlabeled distribution.
//!
//! The core is generic over a [`Scalar`] so the same code runs over `f64`
//! for Monte Carlo work and over big rationals for exact checks. The aliases
//! below fix the common choices.

pub mod concepts;
pub mod distributions;
pub mod error;
pub mod learners;
pub mod mc_harness;
pub mod metric_cover;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type ProductDist = distributions::ProductDistribution<f64>;
pub type FiniteDist = distributions::FiniteSupportDistribution<f64>;
pub type ExactFiniteDist = distributions::FiniteSupportDistribution<Exact>;
pub type Cover = metric_cover::CoverResult<f64>;
