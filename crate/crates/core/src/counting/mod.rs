//! Weighted point counts, gcd strata, partial sums of the singular series at zero frequency,
//! the Hooley sum S_T and local densities ρ_G(p).

mod hooley;
mod rho;
mod series;
mod weighted;

pub use hooley::{hooley_st, HooleyReport, HOOLEY_MAX_T, HOOLEY_MAX_TRIPLES};
pub use rho::{rho_count, rho_g, RhoCase, RhoReport, RHO_AUDIT_CONSTANT, RHO_MAX_P};
pub use series::{sigma_partial, sigma_partial_window, sigma_term_exact, sigma_values, SlopeFit, SIGMA_PARTIAL_MAX_X, SLOPE_POINTS};
pub use weighted::{
    count_gcd_strata, count_weighted, count_weighted_naive, CountReport, Stratum, COUNT_MAX_B, DEFAULT_STRATUM_EXPONENT,
    NAIVE_COUNT_MAX_B,
};
