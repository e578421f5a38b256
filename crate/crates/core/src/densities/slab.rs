use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};

use super::quad::Kahan;
use super::weight::WeightSpec;
use super::{DensityEstimate, DensityMethod};

/// Samples drawn from one RNG stream.
pub const SLAB_BLOCK: u64 = 65_536;
pub const SLAB_MIN_SAMPLES: u64 = 10_000;
pub const SLAB_EPS_RANGE: (f64, f64) = (1e-4, 1e-1);
/// ε values of the extrapolation ladder.
pub const SLAB_LADDER: [f64; 3] = [1e-2, 0.003_162_277_660_168_379_5, 1e-3];

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sumsq: f64,
}

/// One block of the slab estimator. (x1, x2, y) is uniform on the positive-y support box and
/// x3 uniform on the slab fibre {|F| ≤ ε}, an interval of length 2ε/y3²; the sample value is
/// box volume · |J| · W / (2ε) = box volume · W / y3².
fn block(w: &WeightSpec, eps: f64, seed: u64, stream: u64, count: u64) -> Moments {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (d, r) = (w.delta0, w.scale);
    let vol = 8.0 * (2.0 * r).powi(2) * ((1.0 - d) * r).powi(3);
    let mut m = Moments::default();
    for _ in 0..count {
        let x1 = r * (2.0 * rng.gen::<f64>() - 1.0);
        let x2 = r * (2.0 * rng.gen::<f64>() - 1.0);
        let y: [f64; 3] = [0, 1, 2].map(|_| r * (d + (1.0 - d) * rng.gen::<f64>()));
        let y3s = y[2] * y[2];
        let centre = -(x1 * y[0] * y[0] + x2 * y[1] * y[1]) / y3s;
        let x3 = centre + (eps / y3s) * (2.0 * rng.gen::<f64>() - 1.0);
        let val = vol * w.eval([x1, x2, x3, y[0], y[1], y[2]]) / y3s;
        m.sum += val;
        m.sumsq += val * val;
    }
    m
}

fn check(w: &WeightSpec, eps: f64, n: u64) -> Result<()> {
    w.validate()?;
    if !(SLAB_EPS_RANGE.0..=SLAB_EPS_RANGE.1).contains(&eps) {
        return invalid(format!("slab width must lie in [{}, {}]", SLAB_EPS_RANGE.0, SLAB_EPS_RANGE.1));
    }
    if n < SLAB_MIN_SAMPLES {
        return invalid(format!("slab estimator needs at least {SLAB_MIN_SAMPLES} samples"));
    }
    Ok(())
}

fn run(w: &WeightSpec, eps: f64, n: u64, seed: u64, stream_base: u64) -> DensityEstimate {
    let blocks = n.div_ceil(SLAB_BLOCK);
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| block(w, eps, seed, stream_base + b, SLAB_BLOCK.min(n - b * SLAB_BLOCK)))
        .collect();
    let (mut s, mut s2) = (Kahan::default(), Kahan::default());
    for p in &parts {
        s.add(p.sum);
        s2.add(p.sumsq);
    }
    let nf = n as f64;
    let mean = s.value() / nf;
    let var = ((s2.value() / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    DensityEstimate {
        value: mean,
        stderr: (var / nf).sqrt(),
        method: DensityMethod::SlabMonteCarlo,
        samples: n,
        seed,
    }
}

/// Monte Carlo estimate of (2ε)⁻¹ ∫_{|F| ≤ ε} W, reproducible from (seed, n, ε).
pub fn sigma_inf_slab(w: &WeightSpec, eps: f64, n: u64, seed: u64) -> Result<DensityEstimate> {
    check(w, eps, n)?;
    Ok(run(w, eps, n, seed, 0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SlabLadder {
    pub rungs: Vec<(f64, DensityEstimate)>,
    pub extrapolated: DensityEstimate,
}

/// Slab estimates on the ε-ladder, each on its own stream range, and the ε → 0 intercept of
/// the least-squares line through them with the propagated standard error.
pub fn sigma_inf_slab_extrapolated(w: &WeightSpec, n: u64, seed: u64) -> Result<SlabLadder> {
    let mut rungs = Vec::new();
    for (i, &eps) in SLAB_LADDER.iter().enumerate() {
        check(w, eps, n)?;
        rungs.push((eps, run(w, eps, n, seed, (i as u64 + 1) << 40)));
    }
    let k = rungs.len() as f64;
    let mean_e = rungs.iter().map(|r| r.0).sum::<f64>() / k;
    let see: f64 = rungs.iter().map(|r| (r.0 - mean_e).powi(2)).sum();
    // intercept = Σ c_i v_i with c_i = 1/k − mean_e (e_i − mean_e)/see
    let coeff: Vec<f64> = rungs.iter().map(|r| 1.0 / k - mean_e * (r.0 - mean_e) / see).collect();
    let value = rungs.iter().zip(&coeff).map(|(r, c)| c * r.1.value).sum();
    let stderr = rungs.iter().zip(&coeff).map(|(r, c)| (c * r.1.stderr).powi(2)).sum::<f64>().sqrt();
    let extrapolated = DensityEstimate {
        value,
        stderr,
        method: DensityMethod::SlabMonteCarlo,
        samples: n * rungs.len() as u64,
        seed,
    };
    Ok(SlabLadder { rungs, extrapolated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_from_seed() {
        let w = WeightSpec::default();
        let a = sigma_inf_slab(&w, 1e-3, 100_000, 9).unwrap();
        let b = sigma_inf_slab(&w, 1e-3, 100_000, 9).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        assert!(a.stderr > 0.0);
    }

    #[test]
    fn stderr_halves_when_samples_quadruple() {
        let w = WeightSpec::default();
        let a = sigma_inf_slab(&w, 1e-3, 200_000, 1).unwrap();
        let b = sigma_inf_slab(&w, 1e-3, 800_000, 1).unwrap();
        let r = a.stderr / b.stderr;
        assert!((r - 2.0).abs() <= 0.4, "{r}");
    }

    #[test]
    fn two_seeds_agree() {
        let w = WeightSpec::default();
        let a = sigma_inf_slab(&w, 1e-3, 300_000, 1).unwrap();
        let b = sigma_inf_slab(&w, 1e-3, 300_000, 2).unwrap();
        let joint = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.value - b.value).abs() <= 3.0 * joint);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        let w = WeightSpec::default();
        assert!(sigma_inf_slab(&w, 0.5, 100_000, 0).is_err());
        assert!(sigma_inf_slab(&w, 1e-3, 100, 0).is_err());
    }

    #[test]
    fn ladder_intercept_is_consistent() {
        let l = sigma_inf_slab_extrapolated(&WeightSpec::default(), 100_000, 4).unwrap();
        assert_eq!(l.rungs.len(), 3);
        let top = &l.rungs[2].1;
        assert!(l.extrapolated.stderr > 0.0);
        assert!((l.extrapolated.value - top.value).abs() <= 4.0 * l.extrapolated.stderr);
    }
}
