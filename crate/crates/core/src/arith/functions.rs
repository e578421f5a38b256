use crate::error::{invalid, Result};

use super::factor::factor_nonzero;
use super::modular::gcd;

pub fn v_p(n: i128, p: u64) -> Result<u32> {
    if n == 0 {
        return invalid("v_p(0) is infinite");
    }
    if p < 2 {
        return invalid(format!("v_p needs a prime, got {p}"));
    }
    let mut n = n.unsigned_abs();
    let p = p as u128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Ok(v)
}

/// v_p with the convention v_p(0) = ∞, reported as `u32::MAX`.
pub fn v_p_or_inf(n: i128, p: u64) -> u32 {
    v_p(n, p).unwrap_or(u32::MAX)
}

/// Squarefree kernel.
pub fn kappa(q: u64) -> u64 {
    assert!(q >= 1);
    factor_nonzero(q).factors().iter().map(|&(p, _)| p).product()
}

/// Largest square dividing gcd(a, b); {q, 0} is the largest square dividing q.
pub fn square_gcd(a: i128, b: i128) -> Result<u128> {
    if a == 0 && b == 0 {
        return invalid("square_gcd(0, 0) undefined");
    }
    let g = gcd(a, b);
    Ok(largest_square_divisor(g as u64) as u128)
}

pub(crate) fn largest_square_divisor(g: u64) -> u64 {
    factor_nonzero(g)
        .factors()
        .iter()
        .map(|&(p, j)| p.pow(2 * (j / 2)))
        .product()
}

/// Number of y mod q with y² ≡ m.
pub fn eta(q: u64, m: i128) -> u64 {
    assert!(q >= 1);
    factor_nonzero(q)
        .factors()
        .iter()
        .map(|&(p, r)| eta_prime_power(p, r, m))
        .product()
}

fn eta_prime_power(p: u64, r: u32, m: i128) -> u64 {
    let pr = p.pow(r);
    let m = m.rem_euclid(pr as i128) as u64;
    if m == 0 {
        return p.pow(r / 2);
    }
    let mut v = 0;
    let mut unit = m;
    while unit % p == 0 {
        unit /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return 0;
    }
    let s = r - v;
    let lifts = p.pow(v / 2);
    let base = if p == 2 {
        match s {
            1 => 1,
            2 => {
                if unit % 4 == 1 {
                    2
                } else {
                    0
                }
            }
            _ => {
                if unit % 8 == 1 {
                    4
                } else {
                    0
                }
            }
        }
    } else {
        match super::modular::legendre(unit as i128, p) {
            1 => 2,
            _ => 0,
        }
    };
    base * lifts
}

pub fn tau(q: u64) -> u64 {
    factor_nonzero(q).factors().iter().map(|&(_, r)| r as u64 + 1).product()
}

pub fn omega(q: u64) -> u32 {
    factor_nonzero(q).factors().len() as u32
}

pub fn mu(q: u64) -> i32 {
    let f = factor_nonzero(q);
    if !f.is_squarefree() {
        return 0;
    }
    if f.factors().len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn phi(q: u64) -> u64 {
    factor_nonzero(q)
        .factors()
        .iter()
        .map(|&(p, r)| (p - 1) * p.pow(r - 1))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eta_scan(q: u64, m: i128) -> u64 {
        let t = m.rem_euclid(q as i128) as u64;
        (0..q).filter(|&y| (y as u128 * y as u128 % q as u128) as u64 == t).count() as u64
    }

    #[test]
    fn examples() {
        assert_eq!(v_p(12, 2).unwrap(), 2);
        assert_eq!(v_p(12, 5).unwrap(), 0);
        assert_eq!(v_p(-250, 5).unwrap(), 3);
        assert!(v_p(0, 3).is_err());
        assert_eq!(kappa(1), 1);
        assert_eq!(kappa(12), 6);
        assert_eq!(kappa(49), 7);
        assert_eq!(square_gcd(12, 8).unwrap(), 4);
        assert_eq!(square_gcd(18, 12).unwrap(), 1);
        assert_eq!(square_gcd(8, 0).unwrap(), 4);
        assert!(square_gcd(0, 0).is_err());
        assert_eq!(eta(8, 0), 2);
        assert_eq!(eta(5, 4), 2);
        assert_eq!(eta(5, 2), 0);
        assert_eq!(tau(12), 6);
        assert_eq!(mu(30), -1);
        assert_eq!(phi(9), 6);
        assert_eq!(omega(360), 3);
    }

    #[test]
    fn eta_matches_scan_and_bound() {
        for q in 1..=600u64 {
            let sqrt_bound_const = (if q % 2 == 0 { 2 } else { 1 }) * (1u64 << omega(q));
            for m in -100i128..=100 {
                let e = eta(q, m);
                assert_eq!(e, eta_scan(q, m), "q={q} m={m}");
                let sq = if m == 0 { largest_square_divisor(q) } else { square_gcd(q as i128, m).unwrap() as u64 };
                assert!((e * e) as f64 <= (sqrt_bound_const * sqrt_bound_const) as f64 * sq as f64 + 1e-9);
            }
        }
    }

    #[test]
    fn eta_matches_scan_large_moduli() {
        for q in [1024u64, 2187, 3125, 5000, 7203, 9261, 10000] {
            for m in [-100i128, -7, -1, 0, 1, 4, 9, 16, 25, 49, 100] {
                assert_eq!(eta(q, m), eta_scan(q, m));
            }
        }
    }

    #[test]
    fn eta_bound_attained() {
        let mut witnesses = Vec::new();
        for q in 1..=200u64 {
            let c = (if q % 2 == 0 { 2 } else { 1 }) * (1u64 << omega(q));
            for m in -20i128..=20 {
                let sq = if m == 0 { largest_square_divisor(q) } else { square_gcd(q as i128, m).unwrap() as u64 };
                let e = eta(q, m);
                if e * e == c * c * sq {
                    witnesses.push((q, m));
                }
            }
        }
        assert!(witnesses.contains(&(8, 1)));
        assert!(witnesses.contains(&(56, 1)));
    }

    #[test]
    fn square_gcd_exhaustive() {
        for a in -200i128..=200 {
            for b in -200i128..=200 {
                if a == 0 && b == 0 {
                    continue;
                }
                let s = square_gcd(a, b).unwrap();
                let r = (s as f64).sqrt().round() as u128;
                assert_eq!(r * r, s);
                let g = gcd(a, b);
                assert_eq!(g % s, 0);
                assert_eq!((g * g) % (s * s), 0);
            }
        }
    }

    proptest! {
        #[test]
        fn eta_multiplicative(q1 in 1u64..500, q2 in 1u64..500, m in -100i128..100) {
            prop_assume!(gcd(q1 as i128, q2 as i128) == 1);
            prop_assert_eq!(eta(q1 * q2, m), eta(q1, m) * eta(q2, m));
        }

        #[test]
        fn jacobi_multiplicative(a in -10_000i128..10_000, b in -10_000i128..10_000, n in 0i128..500, k in 0i128..500) {
            use crate::arith::jacobi;
            let n = 2 * n + 1;
            let k = 2 * k + 1;
            prop_assert_eq!(jacobi(a * b, n).unwrap(), jacobi(a, n).unwrap() * jacobi(b, n).unwrap());
            prop_assert_eq!(jacobi(a, n * k).unwrap(), jacobi(a, n).unwrap() * jacobi(a, k).unwrap());
            let want = if gcd(a, n) == 1 { 1 } else { 0 };
            prop_assert_eq!(jacobi(a * a, n).unwrap(), want);
        }
    }
}
