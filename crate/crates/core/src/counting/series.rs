use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::spf_sieve;
use crate::densities::Kahan;
use crate::error::{guard, invalid, Result};

pub const SIGMA_PARTIAL_MAX_X: u64 = 10_000_000;
/// Log-spaced abscissae per fit.
pub const SLOPE_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub window: (u64, u64),
    /// ln t at the sample points.
    pub xs: Vec<f64>,
    /// Σ(t) at the sample points.
    pub ys: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the fit residuals.
    pub residual: f64,
}

/// q⁻⁶ S_q(0, 0) at q = p^r: p^{−2r + 3⌊r/2⌋}(1 − 1/p).
fn local_factor(p: u64, r: u32) -> f64 {
    let e = -2 * r as i32 + 3 * (r / 2) as i32;
    (p as f64).powi(e) * (1.0 - 1.0 / p as f64)
}

fn term(mut q: usize, spf: &[u32]) -> f64 {
    let mut f = 1.0;
    while q > 1 {
        let p = spf[q] as usize;
        let mut r = 0;
        while q % p == 0 {
            q /= p;
            r += 1;
        }
        f *= local_factor(p as u64, r);
    }
    f
}

/// Exact q⁻⁶ S_q(0, 0) from the local factors.
pub fn sigma_term_exact(q: u64) -> BigRational {
    let mut f = BigRational::from_integer(BigInt::from(1));
    let mut n = q;
    let mut p = 2;
    while n > 1 {
        if p * p > n {
            p = n;
        }
        let mut r = 0;
        while n % p == 0 {
            n /= p;
            r += 1;
        }
        if r > 0 {
            let bp = BigInt::from(p);
            let e = -2 * r as i32 + 3 * (r / 2) as i32;
            let pe = BigRational::from_integer(bp.pow(e.unsigned_abs()));
            let pe = if e < 0 { pe.recip() } else { pe };
            f *= pe * BigRational::new(BigInt::from(p - 1), bp);
        }
        p += 1;
    }
    f
}

fn sample_points(lo: u64, hi: u64) -> Vec<u64> {
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut ts: Vec<u64> = (0..SLOPE_POINTS)
        .map(|i| (a + (b - a) * i as f64 / (SLOPE_POINTS - 1) as f64).exp().round() as u64)
        .map(|t| t.clamp(lo, hi))
        .collect();
    ts.dedup();
    ts
}

/// Σ(t) = Σ_{q ≤ t} q⁻⁶ S_q(0, 0) at the requested increasing abscissae.
pub fn sigma_values(ts: &[u64]) -> Result<Vec<f64>> {
    let x = *ts.last().unwrap_or(&1);
    if x > SIGMA_PARTIAL_MAX_X {
        return guard(format!("partial sums need t <= {SIGMA_PARTIAL_MAX_X}"));
    }
    if ts.windows(2).any(|w| w[0] > w[1]) || ts.first() == Some(&0) {
        return invalid("abscissae must be positive and nondecreasing");
    }
    let spf = spf_sieve(x as usize);
    let mut out = Vec::with_capacity(ts.len());
    let mut k = Kahan::default();
    let mut next = 0;
    for q in 1..=x as usize {
        k.add(term(q, &spf));
        while next < ts.len() && ts[next] == q as u64 {
            out.push(k.value());
            next += 1;
        }
    }
    Ok(out)
}

/// Least-squares line of Σ(t) against ln t over log-spaced t ∈ [lo, hi].
pub fn sigma_partial_window(lo: u64, hi: u64) -> Result<SlopeFit> {
    if lo < 1 || hi <= lo {
        return invalid("fit window needs 1 <= lo < hi");
    }
    let ts = sample_points(lo, hi);
    let ys = sigma_values(&ts)?;
    let xs: Vec<f64> = ts.iter().map(|&t| (t as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SlopeFit { window: (lo, hi), xs, ys, slope, intercept, residual })
}

/// Fit over [x/100, x].
pub fn sigma_partial(x: u64) -> Result<SlopeFit> {
    if x < 200 {
        return invalid("sigma_partial needs x >= 200");
    }
    sigma_partial_window(x / 100, x)
}
