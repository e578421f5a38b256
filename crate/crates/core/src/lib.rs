//! Exact exponential sums, dual-variety lattice geometry, singular densities
//! and point counts for the cubic fourfold x1*y1^2 + x2*y2^2 + x3*y3^2 = 0.

pub mod acceptance;
pub mod appendix;
pub mod arith;
pub mod counting;
pub mod cyclo;
pub mod densities;
pub mod dualgeom;
pub mod error;
pub mod expsums;
mod freq;

pub use arith::FactoredModulus;
pub use densities::{DensityEstimate, WeightSpec};
pub use error::{Error, Result};
pub use freq::{ExpSumValue, Freq};
