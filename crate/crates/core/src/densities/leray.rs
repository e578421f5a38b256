use rayon::prelude::*;

use crate::error::Result;

use super::quad::{composite, integrate, refine_axes, Tolerance, PANEL_ORDER};
use super::weight::WeightSpec;
use super::{DensityEstimate, DensityMethod};

/// Node budget for the five-dimensional slice quadrature.
pub const LERAY_MAX_NODES: u64 = 4_000_000_000;

/// ∫∫ u(x1) u(x2) u(a x1 + b x2) dx1 dx2 over the unit scale, with b > 0.
/// Both ranges are cut to the support of the third factor.
pub(crate) fn plane_integral(w: &WeightSpec, a: f64, b: f64, panels: usize) -> f64 {
    let x1max = ((1.0 + b) / a).min(1.0);
    integrate(-x1max, x1max, panels, |x1| {
        let u1 = w.u(x1);
        if u1 == 0.0 {
            return 0.0;
        }
        let lo = ((-1.0 - a * x1) / b).max(-1.0);
        let hi = ((1.0 - a * x1) / b).min(1.0);
        u1 * integrate(lo, hi, panels, |x2| w.u(x2) * w.u(a * x1 + b * x2))
    })
}

fn leray_value(w: &WeightSpec, py: usize, px: usize) -> f64 {
    let ys = composite(w.delta0, 1.0, py);
    let vy: Vec<(f64, f64)> = ys.iter().map(|&(y, wt)| (y, wt * w.v(y))).collect();
    let n = vy.len();
    let cells: Vec<f64> = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let (y1, w1) = vy[i];
            let (y2, w2) = vy[j];
            let (y3, w3) = vy[k];
            let weight = w1 * w2 * w3;
            if weight == 0.0 {
                return 0.0;
            }
            let y3s = y3 * y3;
            weight / y3s * plane_integral(w, y1 * y1 / y3s, y2 * y2 / y3s, px)
        })
        .collect();
    8.0 * cells.iter().sum::<f64>()
}

fn leray_cost(py: usize, px: usize) -> u64 {
    ((py * PANEL_ORDER).pow(3) * (px * PANEL_ORDER).pow(2)) as u64
}

/// σ∞ = ∫ W(x1, x2, −(x1y1² + x2y2²)/y3², y) dx1 dx2 dy / y3², by tensor Gauss–Legendre
/// quadrature over the Leray slice with panel refinement until two levels agree.
pub fn sigma_inf_leray(w: &WeightSpec) -> Result<DensityEstimate> {
    sigma_inf_leray_with(w, Tolerance::default())
}

pub fn sigma_inf_leray_with(w: &WeightSpec, tol: Tolerance) -> Result<DensityEstimate> {
    w.validate()?;
    let (v, nodes) = refine_axes(tol, LERAY_MAX_NODES, leray_cost, |py, px| leray_value(w, py, px))?;
    Ok(DensityEstimate {
        value: v * w.scale.powi(3),
        stderr: 0.0,
        method: DensityMethod::LeraySlice,
        samples: nodes,
        seed: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::Profile;

    #[test]
    fn witness_point_on_support() {
        let w = WeightSpec::default();
        let c = w.y_centre();
        let (s, y) = (0.4, [c, c, c]);
        let x = [s, -s, 0.0];
        let f: f64 = (0..3).map(|i| x[i] * y[i] * y[i]).sum();
        assert!(f.abs() < 1e-15);
        assert!(w.eval([x[0], x[1], x[2], y[0], y[1], y[2]]) > 0.0);
        let est = sigma_inf_leray(&w).unwrap();
        assert!(est.value > 0.0 && est.stderr == 0.0);
    }

    #[test]
    fn deterministic_and_scales_cubically() {
        let w = WeightSpec::default();
        let a = sigma_inf_leray(&w).unwrap();
        assert_eq!(a.value.to_bits(), sigma_inf_leray(&w).unwrap().value.to_bits());
        let b = sigma_inf_leray(&WeightSpec { scale: 2.0, ..w }).unwrap();
        assert!((b.value / a.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn enlarging_support_increases_value() {
        let tol = Tolerance { atol: 1e-6, rtol: 1e-2 };
        for d in [0.25, 0.5] {
            let a = sigma_inf_leray_with(&WeightSpec::new(d, 1.0, Profile::Plateau).unwrap(), tol).unwrap();
            let b = sigma_inf_leray_with(&WeightSpec::new(d / 2.0, 1.0, Profile::Plateau).unwrap(), tol).unwrap();
            assert!(b.value > a.value, "{d}: {} vs {}", b.value, a.value);
        }
    }
}
