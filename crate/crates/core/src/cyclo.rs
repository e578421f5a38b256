//! Exact sums of q-th roots of unity, Σ c_k e_q(k), stored as integer
//! coefficient vectors and reduced to the power basis of ℤ[ζ_q].

use crate::arith::{factor_nonzero, mod_inv};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSum {
    q: u64,
    coeffs: Vec<i64>,
}

impl RootSum {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1);
        RootSum { q, coeffs: vec![0; q as usize] }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    #[inline]
    pub fn add(&mut self, k: u64, c: i64) {
        self.coeffs[(k % self.q) as usize] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add_assign(&mut self, other: &RootSum) {
        assert_eq!(self.q, other.q);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += *b;
        }
    }

    /// Product in ℤ[ℤ/q], skipping zero coefficients of `self`.
    pub fn mul(&self, other: &RootSum) -> RootSum {
        assert_eq!(self.q, other.q);
        let q = self.q as usize;
        let nz: Vec<(usize, i64)> = other.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect();
        let mut out = vec![0i64; q];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(j, b) in &nz {
                let k = if i + j >= q { i + j - q } else { i + j };
                out[k] += a * b;
            }
        }
        RootSum { q: self.q, coeffs: out }
    }

    /// Exact value when the sum is a rational integer, otherwise `NonIntegral`.
    pub fn to_integer(&self) -> Result<i128> {
        let mut c: Vec<i128> = self.coeffs.iter().map(|&x| x as i128).collect();
        reduce_power_basis(self.q, &mut c);
        if c.iter().skip(1).any(|&x| x != 0) {
            return Err(Error::NonIntegral(self.q));
        }
        Ok(c[0])
    }

    /// Real part as a float, for diagnostics only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let t = std::f64::consts::TAU * k as f64 / self.q as f64;
                re += c as f64 * t.cos();
                im += c as f64 * t.sin();
            }
        }
        (re, im)
    }
}

/// Rewrites c in the tensor basis ⊗_{p^r ∥ q} {ζ_{p^r}^j : j < φ(p^r)} using
/// Σ_{j<p} ζ_{p^r}^{k + j p^{r-1}} = 0 along each CRT axis.
pub(crate) fn reduce_power_basis(q: u64, c: &mut [i128]) {
    let f = factor_nonzero(q);
    for (p, _, pr) in f.prime_powers() {
        let cof = q / pr;
        let e = (cof as u128 * mod_inv(cof % pr, pr).unwrap_or(0) as u128 % q as u128) as u64;
        let step = pr / p;
        let top = (p - 1) * step;
        for k in 0..q {
            let ki = k % pr;
            if ki < top || c[k as usize] == 0 {
                continue;
            }
            let v = c[k as usize];
            c[k as usize] = 0;
            for j in 0..p - 1 {
                let shift = ((p - 1 - j) as u128 * step as u128 % q as u128 * e as u128 % q as u128) as u64;
                let k2 = (k + q - shift) % q;
                c[k2 as usize] -= v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_sum_vanishes() {
        for q in 2..60u64 {
            let mut s = RootSum::new(q);
            for k in 0..q {
                s.add(k, 3);
            }
            assert_eq!(s.to_integer().unwrap(), 0);
        }
    }

    #[test]
    fn ramanujan_sums() {
        for q in 1..80u64 {
            let mut s = RootSum::new(q);
            for k in 0..q {
                if crate::arith::gcd(k as i128, q as i128) == 1 {
                    s.add(k, 1);
                }
            }
            assert_eq!(s.to_integer().unwrap(), crate::arith::mu(q) as i128, "q={q}");
        }
    }

    #[test]
    fn single_root_is_irrational() {
        for q in 3..40u64 {
            let mut s = RootSum::new(q);
            s.add(1, 1);
            assert_eq!(s.to_integer(), Err(Error::NonIntegral(q)));
        }
    }

    #[test]
    fn quadratic_gauss_sum_square() {
        for p in [3u64, 5, 7, 11, 13] {
            let mut g = RootSum::new(p);
            for y in 0..p {
                g.add(y * y, 1);
            }
            let g2 = g.mul(&g);
            let sign = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(g2.to_integer().unwrap(), sign * p as i128);
        }
    }

    #[test]
    fn agrees_with_float() {
        let mut s = RootSum::new(36);
        for k in 0..36u64 {
            s.add(k * k % 36, 1);
            s.add((36 - k * k % 36) % 36, 1);
        }
        let (re, im) = s.approx();
        assert!(im.abs() < 1e-9);
        assert!((re - s.to_integer().unwrap() as f64).abs() < 1e-9);
    }
}
