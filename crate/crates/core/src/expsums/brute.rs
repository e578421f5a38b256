use crate::arith::{gcd, rem};
use crate::cyclo::RootSum;
use crate::error::{guard, Result};
use crate::freq::{ExpSumValue, Freq};

pub const BRUTE_MAX_Q: u64 = 13;

/// Evaluates S_q from the full definition. The summand factors over the three
/// coordinate pairs, so each factor T(a; m_i, n_i) = Σ_{x,y} e_q(a x y² + m_i x + n_i y)
/// is summed over all (x, y) and the three factors are multiplied in ℤ[ℤ/q].
pub struct BruteForce {
    q: u64,
    units: Vec<u64>,
    // T indexed by (unit index, m mod q, n mod q).
    table: Vec<RootSum>,
}

impl BruteForce {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 || q > BRUTE_MAX_Q {
            return guard(format!("brute force needs 1 <= q <= {BRUTE_MAX_Q}, got {q}"));
        }
        let units: Vec<u64> = (0..q).filter(|&a| gcd(a as i128, q as i128) == 1).collect();
        let mut table = Vec::with_capacity(units.len() * (q * q) as usize);
        for &a in &units {
            for m in 0..q {
                for n in 0..q {
                    let mut t = RootSum::new(q);
                    for x in 0..q {
                        for y in 0..q {
                            t.add((a * x * y * y + m * x + n * y) % q, 1);
                        }
                    }
                    table.push(t);
                }
            }
        }
        Ok(BruteForce { q, units, table })
    }

    fn factor(&self, ai: usize, m: i64, n: i64) -> &RootSum {
        let q = self.q;
        let idx = ai * (q * q) as usize + (rem(m as i128, q) * q + rem(n as i128, q)) as usize;
        &self.table[idx]
    }

    pub fn eval(&self, f: &Freq) -> Result<ExpSumValue> {
        let mut total = RootSum::new(self.q);
        for ai in 0..self.units.len() {
            let prod = self
                .factor(ai, f.m[0], f.n[0])
                .mul(self.factor(ai, f.m[1], f.n[1]))
                .mul(self.factor(ai, f.m[2], f.n[2]));
            total.add_assign(&prod);
        }
        Ok(ExpSumValue::from_i128(total.to_integer()?))
    }
}

pub fn brute_force_full(q: u64, f: &Freq) -> Result<ExpSumValue> {
    BruteForce::new(q)?.eval(f)
}

/// The literal seven-fold loop over (a, x, y); only for tiny q.
pub fn naive_definition(q: u64, f: &Freq) -> Result<ExpSumValue> {
    if q == 0 || q > 7 {
        return guard(format!("naive definition loop needs 1 <= q <= 7, got {q}"));
    }
    let m = f.m.map(|v| rem(v as i128, q));
    let n = f.n.map(|v| rem(v as i128, q));
    let mut s = RootSum::new(q);
    let q3 = q * q * q;
    for a in (0..q).filter(|&a| gcd(a as i128, q as i128) == 1) {
        for xi in 0..q3 {
            let x = [xi % q, xi / q % q, xi / (q * q)];
            for yi in 0..q3 {
                let y = [yi % q, yi / q % q, yi / (q * q)];
                let mut e = 0;
                for i in 0..3 {
                    e += a * x[i] * y[i] * y[i] + m[i] * x[i] + n[i] * y[i];
                }
                s.add(e % q, 1);
            }
        }
    }
    Ok(ExpSumValue::from_i128(s.to_integer()?))
}
