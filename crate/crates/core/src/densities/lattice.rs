use rayon::prelude::*;

use crate::dualgeom::{for_each_kernel_point_in_box, is_primitive};
use crate::error::{invalid, Result};

use super::leray::plane_integral;
use super::quad::{composite, integrate, refine, Tolerance};
use super::weight::WeightSpec;
use super::{DensityEstimate, DensityMethod};

const PANELS: [usize; 5] = [1, 2, 4, 8, 16];
const THETA_PANELS: [usize; 4] = [1, 2, 4, 8];

/// Unit-scale density at a real direction, with the largest |t_i| routed to the third slot.
/// The value is A·B with A = ∫ ∏ v(s t_i) ds and B = ∫∫ u(x1) u(x2) u(x3) dx1 dx2 / t3².
fn density_at(w: &WeightSpec, t: [f64; 3], panels: usize) -> f64 {
    let mut a = t.map(f64::abs);
    let top = (0..3).max_by(|&i, &j| a[i].total_cmp(&a[j])).unwrap();
    a.swap(top, 2);
    if a.contains(&0.0) {
        return 0.0;
    }
    let lo = w.delta0 / a[0].min(a[1]).min(a[2]);
    let hi = 1.0 / a[2];
    if lo >= hi {
        return 0.0;
    }
    let along = 2.0 * integrate(lo, hi, panels, |s| w.v(s * a[0]) * w.v(s * a[1]) * w.v(s * a[2]));
    if along == 0.0 {
        return 0.0;
    }
    let t3s = a[2] * a[2];
    along * plane_integral(w, a[0] * a[0] / t3s, a[1] * a[1] / t3s, panels) / t3s
}

fn estimate(value: f64, nodes: u64) -> DensityEstimate {
    DensityEstimate { value, stderr: 0.0, method: DensityMethod::LeraySlice, samples: nodes, seed: 0 }
}

/// Lattice density at any nonzero real direction; homogeneous of degree −3 in t.
pub fn sigma_lattice_raw(t: [f64; 3], w: &WeightSpec) -> Result<DensityEstimate> {
    w.validate()?;
    if t.iter().all(|&v| v == 0.0) || t.iter().any(|v| !v.is_finite()) {
        return invalid("lattice density needs a finite nonzero direction");
    }
    let (v, nodes) = refine(Tolerance::default(), PANELS.len() as u32 - 1, |l| {
        let p = PANELS[l as usize];
        (density_at(w, t, p), (p * 8 + p * p * 64) as u64)
    })?;
    Ok(estimate(v * w.scale.powi(3), nodes))
}

/// σ∞,Λ⊥(t),W for a primitive integer direction t.
pub fn sigma_lattice(t: [i64; 3], w: &WeightSpec) -> Result<DensityEstimate> {
    if t == [0; 3] || !is_primitive(t) {
        return invalid("sigma_lattice needs a primitive nonzero t");
    }
    sigma_lattice_raw(t.map(|v| v as f64), w)
}

/// Σ_{(x, y) ∈ Λ(t)} W((x, y)/H) / H³ with Λ(t) = {y ∈ ℤt, x ∈ ℤ³, Σ t_i² x_i = 0}; the sum
/// factors into the line sum over y and the plane sum over x.
pub fn lattice_limit_sum(t: [i64; 3], w: &WeightSpec, h: u32) -> Result<DensityEstimate> {
    w.validate()?;
    if t == [0; 3] || !is_primitive(t) {
        return invalid("lattice limit needs a primitive nonzero t");
    }
    if h == 0 || h > 2000 {
        return invalid("lattice limit needs 1 <= H <= 2000");
    }
    let hr = h as f64 * w.scale;
    let tmax = t.iter().map(|v| v.abs()).max().unwrap() as f64;
    let kmax = (hr / tmax).floor() as i64;
    let mut line = 0.0;
    for k in -kmax..=kmax {
        line += t.iter().map(|&ti| w.v((k * ti) as f64 / hr)).product::<f64>();
    }
    let mut plane = 0.0;
    let mut points = 0u64;
    let a = t.map(|v| v * v);
    for_each_kernel_point_in_box(a, hr.floor() as i64, |x| {
        points += 1;
        plane += x.iter().map(|&xi| w.u(xi as f64 / hr)).product::<f64>();
    });
    let value = line * plane / (h as f64).powi(3);
    Ok(DensityEstimate {
        value,
        stderr: 0.0,
        method: DensityMethod::LatticeLimit,
        samples: points * (2 * kmax as u64 + 1),
        seed: 0,
    })
}

/// θ(U) = ∫_{U < |u|∞ ≤ 2U} σ∞,Λ⊥(u),W du, reduced by the sign and permutation symmetries to
/// 24 ∫_U^{2U} r² ∫∫_{[0,1]²} σ(r ω1, r ω2, r) dω dr.
pub fn theta(w: &WeightSpec, u: f64) -> Result<DensityEstimate> {
    w.validate()?;
    if !(u > 0.0 && u.is_finite()) {
        return invalid("theta needs U > 0");
    }
    let rs = composite(u, 2.0 * u, 1);
    let (v, nodes) = refine(Tolerance::default(), THETA_PANELS.len() as u32 - 1, |l| {
        let p = THETA_PANELS[l as usize];
        let om = composite(0.0, 1.0, p);
        let n = om.len();
        let cells: Vec<f64> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let ((o1, w1), (o2, w2)) = (om[idx / n], om[idx % n]);
                let mut s = 0.0;
                for &(r, wr) in &rs {
                    s += wr * r * r * density_at(w, [r * o1, r * o2, r], p);
                }
                w1 * w2 * s
            })
            .collect();
        let nodes = (n * n * rs.len() * (p * 8 + p * p * 64)) as u64;
        (24.0 * cells.iter().sum::<f64>(), nodes)
    })?;
    Ok(estimate(v * w.scale.powi(3), nodes))
}

pub fn theta1(w: &WeightSpec) -> Result<DensityEstimate> {
    theta(w, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::sigma_inf_leray;

    #[test]
    fn positive_at_diagonal_and_zero_off_support() {
        let w = WeightSpec::default();
        assert!(sigma_lattice([1, 1, 1], &w).unwrap().value > 0.0);
        assert_eq!(sigma_lattice([1, 0, 1], &w).unwrap().value, 0.0);
        // |t_i| ratios beyond 1/δ₀ leave no admissible s
        assert_eq!(sigma_lattice([1, 1, 5], &w).unwrap().value, 0.0);
        assert!(sigma_lattice([2, 2, 2], &w).is_err());
        assert!(sigma_lattice_raw([0.0; 3], &w).is_err());
    }

    #[test]
    fn raw_density_is_homogeneous_of_degree_minus_three() {
        let w = WeightSpec::default();
        for t in [[1.0, 1.0, 1.0], [1.0, 2.0, 3.0], [-2.0, 1.0, 3.0]] {
            let base = sigma_lattice_raw(t, &w).unwrap().value;
            assert!(base > 0.0);
            for alpha in [2.0, 3.0, -2.0] {
                let scaled = sigma_lattice_raw(t.map(|v| alpha * v), &w).unwrap().value;
                let want = base / f64::abs(alpha).powi(3);
                assert!((scaled - want).abs() <= 1e-4 * want, "{t:?} {alpha}");
            }
        }
    }

    #[test]
    fn symmetric_under_permutation_and_sign() {
        let w = WeightSpec::default();
        let a = sigma_lattice([1, 2, 3], &w).unwrap().value;
        for t in [[3, 1, 2], [2, 3, 1], [1, -2, 3], [-3, 2, 1]] {
            let b = sigma_lattice(t, &w).unwrap().value;
            assert!((a - b).abs() <= 1e-6 * a, "{t:?}");
        }
    }

    #[test]
    fn lattice_sums_converge_to_the_density() {
        let w = WeightSpec::default();
        for t in [[1, 1, 1], [1, 2, 2]] {
            let sigma = sigma_lattice(t, &w).unwrap().value;
            let errs: Vec<f64> =
                [50, 100, 200].iter().map(|&h| (lattice_limit_sum(t, &w, h).unwrap().value - sigma).abs()).collect();
            let tol = 1e-4 * sigma;
            assert!(errs[1] <= errs[0] + tol && errs[2] <= errs[1] + tol, "{t:?} {errs:?}");
            assert!(errs[2] <= 1e-3 * sigma, "{t:?} {errs:?}");
        }
    }

    #[test]
    fn theta_matches_two_log_two_sigma_and_is_shell_invariant() {
        let w = WeightSpec::default();
        let s = sigma_inf_leray(&w).unwrap().value;
        let t1 = theta1(&w).unwrap().value;
        let ratio = t1 / s;
        assert!((ratio - 2.0 * 2f64.ln()).abs() <= 0.02 * 2.0 * 2f64.ln(), "{ratio}");
        for u in [2.0, 4.0] {
            let tu = theta(&w, u).unwrap().value;
            assert!((tu - t1).abs() <= 0.01 * t1, "{u}");
        }
    }
}
