use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{legendre, rem};
use crate::error::{guard, Result};
use crate::freq::{ExpSumValue, Freq};

use super::gauss::{gauss_closed, GaussAcc};
use super::{check_odd_prime, F2_MAX_P};

fn residues(b: &Freq, p: u64) -> ([u64; 3], [u64; 3]) {
    (b.m.map(|v| rem(v as i128, p)), b.n.map(|v| rem(v as i128, p)))
}

/// S_p(m, n) for F₂ = Σ x_i y_i² + x1 x2 x3. The y-sums are the Gauss sums G(a x_i, n_i); with
/// w = a x the a-sum becomes Σ_{c≠0} ψ(P c² + L c) = G(P, L) − 1 where P = w1 w2 w3 and
/// L = m·w, leaving an exact O(p³) sum over w.
pub fn s_p_f2(p: u64, b: &Freq) -> Result<ExpSumValue> {
    check_odd_prime(p)?;
    if p > F2_MAX_P {
        return guard(format!("s_p_f2 needs p <= {F2_MAX_P}"));
    }
    let (m, n) = residues(b, p);
    let f: Vec<Vec<(u64, i128, u32)>> = (0..3).map(|i| (0..p).map(|w| gauss_closed(p, w, n[i])).collect()).collect();
    let pu = p as usize;
    let table: Vec<(u64, i128, u32)> = (0..p * p).map(|i| gauss_closed(p, i / p, i % p)).collect();
    let mut acc = GaussAcc::new(p);
    for w1 in 0..p {
        let f1 = f[0][w1 as usize];
        if f1.1 == 0 {
            continue;
        }
        for w2 in 0..p {
            let f2 = f[1][w2 as usize];
            if f2.1 == 0 {
                continue;
            }
            let p12 = w1 * w2 % p;
            let l12 = (m[0] * w1 + m[1] * w2) % p;
            for w3 in 0..p {
                let f3 = f[2][w3 as usize];
                if f3.1 == 0 {
                    continue;
                }
                let e = f1.0 + f2.0 + f3.0;
                let c = f1.1 * f2.1 * f3.1;
                let k = f1.2 + f2.2 + f3.2;
                let (eg, cg, kg) = table[(p12 * w3 % p) as usize * pu + ((l12 + m[2] * w3) % p) as usize];
                acc.add(e + eg, c * cg, k + kg);
                acc.add(e, -c, k);
            }
        }
    }
    Ok(ExpSumValue::from_i128(acc.finish()?))
}

/// (N₁, N₂, N₃, N₄) for the quadratic form Q(x) = −Σ n_i² x_j x_k: N₁ counts x with
/// (m·x)² = Q(x), N₃ counts (x, u) with u² = Q(x), and N₂, N₄ restrict to x1 x2 x3 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NCounts {
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub n4: u64,
}

pub fn n_counts(p: u64, b: &Freq) -> Result<NCounts> {
    check_odd_prime(p)?;
    if p > F2_MAX_P {
        return guard(format!("n_counts needs p <= {F2_MAX_P}"));
    }
    let (m, n) = residues(b, p);
    let nsq = n.map(|v| v * v % p);
    let mut c = NCounts { n1: 0, n2: 0, n3: 0, n4: 0 };
    for x1 in 0..p {
        for x2 in 0..p {
            for x3 in 0..p {
                let s = (nsq[0] * x2 % p * x3 + nsq[1] * x1 % p * x3 + nsq[2] * x1 % p * x2) % p;
                let q = (p - s) % p;
                let l = (m[0] * x1 + m[1] * x2 + m[2] * x3) % p;
                let on_conic = u64::from(l * l % p == q);
                let roots = (1 + legendre(q as i128, p)) as u64;
                let axis = x1 * x2 % p * x3 % p == 0;
                c.n1 += on_conic;
                c.n3 += roots;
                if axis {
                    c.n2 += on_conic;
                    c.n4 += roots;
                }
            }
        }
    }
    Ok(c)
}

/// det of 2·Gram((m·x)² + Σ n_i² x_j x_k): diagonal 2m_i², entry (j, k) equal to 2m_j m_k + n_i²
/// for {i, j, k} = {1, 2, 3}. A sextic form in (m, n); the conic of N₁ is smooth mod an odd p
/// exactly when p does not divide it.
pub fn conic_det(b: &Freq) -> i128 {
    let m = b.m.map(|v| v as i128);
    let n2 = b.n.map(|v| v as i128 * v as i128);
    let mut a = [[0i128; 3]; 3];
    for i in 0..3 {
        a[i][i] = 2 * m[i] * m[i];
    }
    for (i, j, k) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        a[j][k] = 2 * m[j] * m[k] + n2[i];
        a[k][j] = a[j][k];
    }
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SalieCheck {
    Holds { value: String },
    Fails { lhs: String, rhs_numerator: String },
    /// p | n1 n2 n3.
    Skipped,
}

/// Compares S_p(m, n) with p²(p(N₁ − N₂) − (N₃ − N₄))/(p − 1) when p ∤ n1 n2 n3.
pub fn salie_identity_check(p: u64, b: &Freq) -> Result<SalieCheck> {
    check_odd_prime(p)?;
    if b.n.iter().any(|&v| rem(v as i128, p) == 0) {
        return Ok(SalieCheck::Skipped);
    }
    let s = s_p_f2(p, b)?.0;
    let c = n_counts(p, b)?;
    let pi = p as i128;
    let num = pi * pi * (pi * (c.n1 as i128 - c.n2 as i128) - (c.n3 as i128 - c.n4 as i128));
    let lhs = s.clone() * num_bigint::BigInt::from(pi - 1);
    if lhs == num_bigint::BigInt::from(num) {
        Ok(SalieCheck::Holds { value: s.to_string() })
    } else {
        Ok(SalieCheck::Fails { lhs: s.to_string(), rhs_numerator: num.to_string() })
    }
}

/// Random frequencies with p ∤ n1 n2 n3, drawn from [0, p)⁶.
pub fn salie_samples(p: u64, count: usize, seed: u64) -> Vec<Freq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    (0..count)
        .map(|_| {
            let m = [0; 3].map(|_| rng.gen_range(0..p as i64));
            let n = [0; 3].map(|_| rng.gen_range(1..p as i64));
            Freq::new(m, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appendix::family::brute_family;

    #[test]
    fn matches_definition_scan() {
        for p in [3u64, 5, 7] {
            for b in [Freq::ZERO, Freq::new([1, 1, 1], [1, 1, 1]), Freq::new([0, 2, 1], [1, 0, 3]), Freq::new([1, 2, 3], [0, 0, 0])] {
                let fast = s_p_f2(p, &b).unwrap().0;
                let slow = brute_family(p, -1, 0, &b, 1).unwrap();
                assert_eq!(fast, slow.into(), "p={p} {b}");
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..6 {
            let b = Freq::new([0; 3].map(|_| rng.gen_range(-5..=5)), [0; 3].map(|_| rng.gen_range(-5..=5)));
            assert_eq!(s_p_f2(11, &b).unwrap().0, brute_family(11, -1, 0, &b, 1).unwrap().into(), "{b}");
        }
    }

    #[test]
    fn character_independent() {
        for p in [5u64, 7] {
            for b in [Freq::new([1, 1, 1], [1, 1, 1]), Freq::new([2, 0, 1], [3, 1, 0])] {
                assert_eq!(brute_family(p, -1, 0, &b, 1).unwrap(), brute_family(p, -1, 0, &b, 2).unwrap());
            }
        }
    }

    #[test]
    fn point_count_anchors() {
        for p in [5u64, 7, 11, 13] {
            for b in salie_samples(p, 20, 3) {
                let c = n_counts(p, &b).unwrap();
                assert_eq!(c.n3, p * p * p + p * p - p, "p={p} {b}");
                if rem(conic_det(&b), p) != 0 {
                    assert_eq!(c.n1, p * p, "p={p} {b}");
                }
            }
        }
        let z = n_counts(5, &Freq::ZERO).unwrap();
        assert_eq!((z.n1, z.n3), (125, 125));
    }

    #[test]
    fn salie_identity() {
        assert!(matches!(salie_identity_check(5, &Freq::new([1; 3], [1; 3])).unwrap(), SalieCheck::Holds { .. }));
        for b in salie_samples(11, 50, 1) {
            assert!(matches!(salie_identity_check(11, &b).unwrap(), SalieCheck::Holds { .. }), "{b}");
        }
        assert_eq!(salie_identity_check(7, &Freq::new([3, 1, 4], [0, 1, 1])).unwrap(), SalieCheck::Skipped);
    }

    #[test]
    fn conic_det_is_a_sextic_form() {
        let b = Freq::new([1, 2, -1], [3, 1, 2]);
        let b2 = Freq::new(b.m.map(|v| 2 * v), b.n.map(|v| 2 * v));
        assert_eq!(conic_det(&b2), 64 * conic_det(&b));
        // Gram matrix of (m·x)² alone has rank one
        assert_eq!(conic_det(&Freq::new([1, 2, 3], [0, 0, 0])), 0);
    }
}
