//! Weights, the real density σ∞ by quadrature and by Monte Carlo, lattice densities, θ(U)
//! and the predicted leading constants.

mod constants;
mod lattice;
mod leray;
mod quad;
mod slab;
mod weight;

use serde::{Deserialize, Serialize};

pub use constants::{predicted_constants, predicted_constants_from, zeta3, PredictedConstants};
pub use lattice::{lattice_limit_sum, sigma_lattice, sigma_lattice_raw, theta, theta1};
pub use leray::{sigma_inf_leray, sigma_inf_leray_with};
pub use quad::Tolerance;
pub use slab::{
    sigma_inf_slab, sigma_inf_slab_extrapolated, SlabLadder, SLAB_BLOCK, SLAB_EPS_RANGE, SLAB_LADDER, SLAB_MIN_SAMPLES,
};
pub(crate) use quad::Kahan;
pub use weight::{weight_eval, Profile, WeightSpec, PLATEAU_EDGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    SlabMonteCarlo,
    LeraySlice,
    LatticeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub value: f64,
    /// Zero for deterministic quadrature.
    pub stderr: f64,
    pub method: DensityMethod,
    /// Samples, quadrature nodes or lattice points.
    pub samples: u64,
    pub seed: u64,
}
