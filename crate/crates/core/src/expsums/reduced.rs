use num_bigint::BigInt;

use crate::arith::{gcd, mod_inv, mul_mod, rem};
use crate::cyclo::RootSum;
use crate::error::{guard, Result};
use crate::freq::{ExpSumValue, Freq};

pub const REDUCED_MAX_Q: u64 = 100_000;

/// Square roots of every residue mod q, stored compactly.
pub(crate) struct RootTable {
    start: Vec<u32>,
    roots: Vec<u32>,
}

impl RootTable {
    pub(crate) fn by_squaring(q: u64) -> Self {
        let mut count = vec![0u32; q as usize + 1];
        for y in 0..q {
            count[mul_mod(y, y, q) as usize + 1] += 1;
        }
        for i in 1..count.len() {
            count[i] += count[i - 1];
        }
        let mut fill = count.clone();
        let mut roots = vec![0u32; q as usize];
        for y in 0..q {
            let s = mul_mod(y, y, q) as usize;
            roots[fill[s] as usize] = y as u32;
            fill[s] += 1;
        }
        RootTable { start: count, roots }
    }

    pub(crate) fn from_lists(lists: Vec<Vec<u64>>) -> Self {
        let mut start = vec![0u32];
        let mut roots = Vec::new();
        for l in lists {
            roots.extend(l.into_iter().map(|y| y as u32));
            start.push(roots.len() as u32);
        }
        RootTable { start, roots }
    }

    #[inline]
    pub(crate) fn get(&self, t: u64) -> &[u32] {
        &self.roots[self.start[t as usize] as usize..self.start[t as usize + 1] as usize]
    }
}

/// Per-modulus data for S_q(m,n) = q³ Σ*_a Σ_{a y_i² ≡ −m_i} e_q(n·y).
pub struct ReducedSum {
    q: u64,
    units: Vec<(u64, u64)>,
    roots: RootTable,
}

impl ReducedSum {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 || q > REDUCED_MAX_Q {
            return guard(format!("reduced_sum needs 1 <= q <= {REDUCED_MAX_Q}, got {q}"));
        }
        let units = (0..q)
            .filter(|&a| gcd(a as i128, q as i128) == 1)
            .map(|a| (a, mod_inv(a, q).unwrap_or(0)))
            .collect();
        Ok(ReducedSum { q, units, roots: RootTable::by_squaring(q) })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn eval(&self, f: &Freq) -> Result<ExpSumValue> {
        let q = self.q;
        if q == 1 {
            return Ok(ExpSumValue::from(1));
        }
        let m = f.m.map(|v| rem(v as i128, q));
        let n = f.n.map(|v| rem(v as i128, q));
        let active: Vec<usize> = (0..3).filter(|&i| m[i] != 0).collect();

        // Coordinates with m_i ≡ 0 contribute an a-independent factor.
        let mut constant = RootSum::new(q);
        constant.add(0, 1);
        for i in (0..3).filter(|&i| m[i] == 0) {
            let mut r = RootSum::new(q);
            for &y in self.roots.get(0) {
                r.add(mul_mod(n[i], y as u64, q), 1);
            }
            constant = constant.mul(&r);
        }

        let mut acc = RootSum::new(q);
        if active.is_empty() {
            acc.add(0, self.units.len() as i64);
        } else {
            let mut lists: [&[u32]; 3] = [&[], &[], &[]];
            'units: for &(_, inv) in &self.units {
                for (slot, &i) in active.iter().enumerate() {
                    let t = mul_mod(q - m[i], inv, q);
                    lists[slot] = self.roots.get(t);
                    if lists[slot].is_empty() {
                        continue 'units;
                    }
                }
                accumulate(&mut acc, &active, &lists, &n, q);
            }
        }
        let total = acc.mul(&constant).to_integer()?;
        Ok(ExpSumValue(BigInt::from(total) * BigInt::from(q).pow(3)))
    }
}

fn accumulate(acc: &mut RootSum, active: &[usize], lists: &[&[u32]; 3], n: &[u64; 3], q: u64) {
    match active.len() {
        1 => {
            for &y0 in lists[0] {
                acc.add(mul_mod(n[active[0]], y0 as u64, q), 1);
            }
        }
        2 => {
            for &y0 in lists[0] {
                let s0 = mul_mod(n[active[0]], y0 as u64, q);
                for &y1 in lists[1] {
                    acc.add(s0 + mul_mod(n[active[1]], y1 as u64, q), 1);
                }
            }
        }
        _ => {
            for &y0 in lists[0] {
                let s0 = mul_mod(n[active[0]], y0 as u64, q);
                for &y1 in lists[1] {
                    let s1 = s0 + mul_mod(n[active[1]], y1 as u64, q);
                    for &y2 in lists[2] {
                        acc.add(s1 + mul_mod(n[active[2]], y2 as u64, q), 1);
                    }
                }
            }
        }
    }
}

pub fn reduced_sum(q: u64, f: &Freq) -> Result<ExpSumValue> {
    ReducedSum::new(q)?.eval(f)
}
