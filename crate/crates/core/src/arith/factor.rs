use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A positive integer together with its factorization into prime powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredModulus {
    factors: Vec<(u64, u32)>,
    value: BigUint,
}

impl FactoredModulus {
    pub fn one() -> Self {
        FactoredModulus { factors: Vec::new(), value: BigUint::from(1u32) }
    }

    /// Builds from explicit prime powers; primes must be strictly increasing.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value = BigUint::from(1u32);
        let mut last = 1u64;
        for &(p, r) in &factors {
            if p <= last || !is_prime(p) || r == 0 {
                return invalid(format!("bad prime power {p}^{r}"));
            }
            last = p;
            value *= BigUint::from(p).pow(r);
        }
        Ok(FactoredModulus { factors, value })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// The value as a machine integer, when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        u64::try_from(&self.value).ok()
    }

    pub fn is_square_full(&self) -> bool {
        self.factors.iter().all(|&(_, r)| r >= 2)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, r)| r == 1)
    }

    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, r)| (p, r, p.pow(r)))
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut ds = vec![1u64];
        for &(p, r) in &self.factors {
            let len = ds.len();
            let mut pk = 1u64;
            for _ in 0..r {
                pk *= p;
                for i in 0..len {
                    ds.push(ds[i] * pk);
                }
            }
        }
        ds.sort_unstable();
        ds
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = 17u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization; adequate for the moduli handled here.
pub fn factor(q: u64) -> Result<FactoredModulus> {
    if q == 0 {
        return invalid("cannot factor 0");
    }
    Ok(factor_nonzero(q))
}

pub(crate) fn factor_nonzero(mut q: u64) -> FactoredModulus {
    let value = BigUint::from(q);
    let mut factors = Vec::new();
    let mut push = |q: &mut u64, p: u64| {
        let mut r = 0;
        while *q % p == 0 {
            *q /= p;
            r += 1;
        }
        if r > 0 {
            factors.push((p, r));
        }
    };
    push(&mut q, 2);
    push(&mut q, 3);
    let mut d = 5u64;
    while d * d <= q {
        push(&mut q, d);
        push(&mut q, d + 2);
        d += 6;
    }
    if q > 1 {
        factors.push((q, 1));
    }
    FactoredModulus { factors, value }
}

/// Primes up to `n` inclusive.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for `0..=n`.
pub fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}
