use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::{is_prime, mod_inv, mul_mod, rem, sqrt_mod_prime_power};
use crate::error::{guard, invalid, Error, Result};
use crate::freq::{ExpSumValue, Freq};

use super::reduced::RootTable;

pub const PRIME_POWER_MAX_Q: u64 = 100_000;

/// Counts (N₀, N₁) and evaluates S_{p^r} = p^{4r}/φ(p^r) · (N₀ − N₁/p), where N_j
/// counts units a and y mod p^r with a y_i² + m_i ≡ 0 and n·y ≡ 0 mod p^{r−j}.
pub struct PrimePower {
    p: u64,
    r: u32,
    q: u64,
    units: Vec<u64>,
    roots: RootTable,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("prime_power needs a prime, got {p}"));
        }
        if r < 1 {
            return invalid("prime_power needs r >= 1");
        }
        let q = match p.checked_pow(r) {
            Some(q) if q <= PRIME_POWER_MAX_Q => q,
            _ => return guard(format!("prime_power needs p^r <= {PRIME_POWER_MAX_Q}")),
        };
        let units = (1..q).filter(|a| a % p != 0).collect();
        let lists = (0..q).map(|t| sqrt_mod_prime_power(t, p, r)).collect();
        Ok(PrimePower { p, r, q, units, roots: RootTable::from_lists(lists) })
    }

    pub fn counts(&self, f: &Freq) -> (u64, u64) {
        let (q, p) = (self.q, self.p);
        let qd = q / p;
        let m = f.m.map(|v| rem(v as i128, q));
        let n = f.n.map(|v| rem(v as i128, q));
        let active: Vec<usize> = (0..3).filter(|&i| m[i] != 0).collect();

        // Histogram of the n·y contribution from coordinates with m_i ≡ 0.
        let mut h0 = vec![0u64; q as usize];
        h0[0] = 1;
        for i in (0..3).filter(|&i| m[i] == 0) {
            let mut next = vec![0u64; q as usize];
            for (s, &c) in h0.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &y in self.roots.get(0) {
                    let t = (s as u64 + mul_mod(n[i], y as u64, q)) % q;
                    next[t as usize] += c;
                }
            }
            h0 = next;
        }
        let mut h1 = vec![0u64; qd as usize];
        for (s, &c) in h0.iter().enumerate() {
            h1[s % qd as usize] += c;
        }

        let (mut n0, mut n1) = (0u64, 0u64);
        let mut tally = |s: u64| {
            let neg = (q - s % q) % q;
            n0 += h0[neg as usize];
            n1 += h1[(neg % qd) as usize];
        };
        if active.is_empty() {
            for _ in &self.units {
                tally(0);
            }
            return (n0, n1);
        }
        for &a in &self.units {
            let inv = mod_inv(a, q).unwrap_or(0);
            let lists: Vec<&[u32]> = active.iter().map(|&i| self.roots.get(mul_mod(q - m[i], inv, q))).collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let ni: Vec<u64> = active.iter().map(|&i| n[i]).collect();
            match lists.len() {
                1 => {
                    for &y0 in lists[0] {
                        tally(mul_mod(ni[0], y0 as u64, q));
                    }
                }
                2 => {
                    for &y0 in lists[0] {
                        let s0 = mul_mod(ni[0], y0 as u64, q);
                        for &y1 in lists[1] {
                            tally(s0 + mul_mod(ni[1], y1 as u64, q));
                        }
                    }
                }
                _ => {
                    for &y0 in lists[0] {
                        let s0 = mul_mod(ni[0], y0 as u64, q);
                        for &y1 in lists[1] {
                            let s1 = s0 + mul_mod(ni[1], y1 as u64, q);
                            for &y2 in lists[2] {
                                tally(s1 + mul_mod(ni[2], y2 as u64, q));
                            }
                        }
                    }
                }
            }
        }
        (n0, n1)
    }

    pub fn eval(&self, f: &Freq) -> Result<ExpSumValue> {
        let (n0, n1) = self.counts(f);
        let p = BigInt::from(self.p);
        let num = p.pow(4 * self.r) * (BigInt::from(n0) * &p - BigInt::from(n1));
        let den = BigInt::from(self.q) * BigInt::from(self.p - 1);
        let (v, rest) = num.div_rem(&den);
        if rest != BigInt::from(0) {
            return Err(Error::Invariant(format!("prime-power formula not integral at {}^{}", self.p, self.r)));
        }
        Ok(ExpSumValue(v))
    }
}

pub fn prime_power(p: u64, r: u32, f: &Freq) -> Result<ExpSumValue> {
    if r < 2 {
        return invalid("prime_power is for r >= 2");
    }
    PrimePower::new(p, r)?.eval(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgeom::dual_form;
    use crate::expsums::reduced::ReducedSum;

    #[test]
    fn examples() {
        assert_eq!(prime_power(3, 2, &Freq::ZERO).unwrap(), ExpSumValue::from(118098));
        assert_eq!(prime_power(5, 2, &Freq::new([1; 3], [1; 3])).unwrap(), ExpSumValue::from(0));
        assert_eq!(prime_power(3, 3, &Freq::new([1; 3], [1; 3])).unwrap(), ExpSumValue::from(0));
        assert!(prime_power(4, 2, &Freq::ZERO).is_err());
        assert!(prime_power(3, 1, &Freq::ZERO).is_err());
        assert!(prime_power(2, 17, &Freq::ZERO).is_err());
    }

    #[test]
    fn also_valid_at_r_equal_one() {
        for p in [2u64, 3, 5, 7] {
            let pp = PrimePower::new(p, 1).unwrap();
            let rs = ReducedSum::new(p).unwrap();
            for f in Freq::boxed(1) {
                assert_eq!(pp.eval(&f).unwrap(), rs.eval(&f).unwrap());
            }
        }
    }

    #[test]
    fn matches_reduced_sum() {
        for (p, r) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let pp = PrimePower::new(p, r).unwrap();
            let rs = ReducedSum::new(p.pow(r)).unwrap();
            for f in Freq::boxed(1) {
                assert_eq!(pp.eval(&f).unwrap(), rs.eval(&f).unwrap(), "{p}^{r} {f}");
            }
        }
    }

    #[test]
    fn counts_vanish_above_valuation() {
        // N_j = 0 whenever r > j + v_p(D).
        for (p, r) in [(3u64, 2u32), (3, 3), (5, 2), (2, 3)] {
            let pp = PrimePower::new(p, r).unwrap();
            for f in Freq::boxed(1) {
                let d = dual_form(&f);
                let v = crate::arith::v_p_or_inf(d, p);
                let (n0, n1) = pp.counts(&f);
                if v != u32::MAX {
                    if r > v {
                        assert_eq!(n0, 0, "{p}^{r} {f}");
                    }
                    if r > 1 + v {
                        assert_eq!(n1, 0, "{p}^{r} {f}");
                    }
                    if r == 1 + v {
                        assert!(n1 <= (p - 1) * p.pow(r - 1), "{p}^{r} {f}");
                    }
                }
            }
        }
    }
}
