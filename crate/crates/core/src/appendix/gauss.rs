use crate::arith::{legendre, mod_inv};
use crate::cyclo::{reduce_power_basis, RootSum};
use crate::error::{Error, Result};

/// Sums c·ζ_p^e·g^k with g = G(1, 0) = Σ_y ζ_p^{y²}, kept as an even part and a g-part
/// using g² = (−1/p) p.
pub(crate) struct GaussAcc {
    p: u64,
    eps: i128,
    even: Vec<i128>,
    odd: Vec<i128>,
}

impl GaussAcc {
    pub fn new(p: u64) -> Self {
        GaussAcc { p, eps: legendre(-1, p) as i128, even: vec![0; p as usize], odd: vec![0; p as usize] }
    }

    #[inline]
    pub fn add(&mut self, e: u64, c: i128, gpow: u32) {
        if c == 0 {
            return;
        }
        let scale = (self.eps * self.p as i128).pow(gpow / 2);
        let slot = (e % self.p) as usize;
        if gpow % 2 == 0 {
            self.even[slot] += c * scale;
        } else {
            self.odd[slot] += c * scale;
        }
    }

    /// The accumulated value, which must be a rational integer.
    pub fn finish(self) -> Result<i128> {
        let p = self.p as usize;
        let mut total = self.even;
        for (e, &c) in self.odd.iter().enumerate() {
            if c != 0 {
                for y in 0..p {
                    total[(e + y * y) % p] += c;
                }
            }
        }
        reduce_power_basis(self.p, &mut total);
        if total.iter().skip(1).any(|&c| c != 0) {
            return Err(Error::NonIntegral(self.p));
        }
        Ok(total[0])
    }
}

/// G(a, b) = Σ_y ψ(a y² + b y) in the closed form ψ(−b²/4a)(a/p) g 1_{a≠0} + p 1_{a=b=0},
/// returned as (exponent, coefficient, power of g).
#[inline]
pub(crate) fn gauss_closed(p: u64, a: u64, b: u64) -> (u64, i128, u32) {
    let (a, b) = (a % p, b % p);
    if a == 0 {
        return (0, if b == 0 { p as i128 } else { 0 }, 0);
    }
    let inv = mod_inv(4 * a % p, p).expect("p odd and a nonzero");
    let e = (p - b * b % p * inv % p) % p;
    (e, legendre(a as i128, p) as i128, 1)
}

/// Whether the closed form agrees with the direct sum for every (a, b) mod p.
pub fn gauss_sum_check(p: u64) -> Result<bool> {
    crate::appendix::check_odd_prime(p)?;
    let mut g = RootSum::new(p);
    for y in 0..p {
        g.add(y * y, 1);
    }
    for a in 0..p {
        for b in 0..p {
            let mut diff = RootSum::new(p);
            for y in 0..p {
                diff.add(a * y % p * y + b * y, 1);
            }
            let (e, c, k) = gauss_closed(p, a, b);
            if k == 0 {
                diff.add(0, -(c as i64));
            } else {
                for y in 0..p {
                    diff.add(e + y * y, -(c as i64));
                }
            }
            let mut coeffs: Vec<i128> = diff.coeffs().iter().map(|&c| c as i128).collect();
            reduce_power_basis(p, &mut coeffs);
            if coeffs.iter().any(|&c| c != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// G(1, 0)² by direct multiplication of root sums.
pub fn gauss_square(p: u64) -> Result<i128> {
    crate::appendix::check_odd_prime(p)?;
    let mut g = RootSum::new(p);
    for y in 0..p {
        g.add(y * y, 1);
    }
    g.mul(&g).to_integer()
}
