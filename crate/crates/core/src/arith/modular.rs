use crate::error::{invalid, Result};

/// Least nonnegative residue of `a` modulo `m`.
#[inline]
pub fn rem(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// (g, x, y) with a x + b y = g = gcd(a, b) ≥ 0.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(rem(x, m))
}

pub fn gcd(a: i128, b: i128) -> u128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Jacobi symbol (a/b) for odd b ≥ 1.
pub fn jacobi(a: i128, b: i128) -> Result<i32> {
    if b < 1 || b % 2 == 0 {
        return invalid(format!("jacobi needs odd positive modulus, got {b}"));
    }
    let mut a = a.rem_euclid(b);
    let mut b = b;
    let mut s = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = b % 8;
            if r == 3 || r == 5 {
                s = -s;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            s = -s;
        }
        a %= b;
    }
    Ok(if b == 1 { s } else { 0 })
}

/// Legendre symbol for an odd prime p.
#[inline]
pub fn legendre(a: i128, p: u64) -> i32 {
    jacobi(a, p as i128).expect("odd prime")
}

/// One square root of a nonzero quadratic residue modulo an odd prime.
pub fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = mod_pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// All y mod p^r with y² ≡ a, sorted. Roots mod p come from Tonelli–Shanks and
/// are lifted one digit at a time, which also covers p = 2 and p | a.
pub fn sqrt_mod_prime_power(a: u64, p: u64, r: u32) -> Vec<u64> {
    let mut roots: Vec<u64> = match tonelli_shanks(a % p, p) {
        None => return Vec::new(),
        Some(0) => vec![0],
        Some(y) if y == p - y => vec![y],
        Some(y) => {
            let mut v = vec![y, p - y];
            v.sort_unstable();
            v
        }
    };
    let mut pk = p;
    for _ in 1..r {
        let next = pk * p;
        let target = a % next;
        let mut lifted = Vec::new();
        for &y in &roots {
            for t in 0..p {
                let z = y + t * pk;
                if mul_mod(z, z, next) == target {
                    lifted.push(z);
                }
            }
        }
        roots = lifted;
        pk = next;
        if roots.is_empty() {
            break;
        }
    }
    roots.sort_unstable();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(1, 9).unwrap(), 1);
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert_eq!(jacobi(-1, 7).unwrap(), -1);
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 97, 499] {
            for a in -50i128..50 {
                let e = mod_pow(rem(a, p), (p - 1) / 2, p);
                let want = if e == 0 { 0 } else if e == 1 { 1 } else { -1 };
                assert_eq!(legendre(a, p), want, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn inverse_and_gcd() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(gcd(-12, 18), 6);
        let (g, x, y) = ext_gcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * x + 46 * y, 2);
    }

    #[test]
    fn roots_match_squaring_table() {
        for (p, rmax) in [(2u64, 10u32), (3, 6), (5, 4), (7, 3), (11, 2), (13, 2)] {
            for r in 1..=rmax {
                let q = p.pow(r);
                let mut table = vec![Vec::new(); q as usize];
                for y in 0..q {
                    table[mul_mod(y, y, q) as usize].push(y);
                }
                for a in 0..q {
                    assert_eq!(sqrt_mod_prime_power(a, p, r), table[a as usize], "a={a} q={q}");
                }
            }
        }
    }
}
