//! The second cubic Σ x_i y_i² + x1 x2 x3: Gauss-sum evaluation of its exponential sums, the
//! point-count identity behind the Salié reduction, and scans of |S_p(b)|/p³ off exceptional loci.

mod f2;
mod family;
mod gauss;
mod scan;

use crate::arith::is_prime;
use crate::error::{invalid, Result};

pub use f2::{conic_det, n_counts, s_p_f2, salie_identity_check, salie_samples, NCounts, SalieCheck};
pub use family::{brute_family, family_sum, BRUTE_FAMILY_MAX_P, FAMILY_MAX_P};
pub use gauss::{gauss_square, gauss_sum_check};
pub use scan::{
    diamond_scan, Cubic, DiamondScanReport, DiamondWitness, SCAN_F2_MAX_BOX, SCAN_F2_MAX_P, SCAN_FAMILY_MAX_BOX,
    SCAN_F_MAX_BOX, SCAN_F_MAX_P,
};

pub const F2_MAX_P: u64 = 300;

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return invalid(format!("{p} is not an odd prime"));
    }
    Ok(())
}
