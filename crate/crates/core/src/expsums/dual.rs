use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factor, legendre, rem, FactoredModulus};
use crate::dualgeom::{dual_form, lambda_perp_basis};
use crate::error::{guard, invalid, Result};
use crate::freq::Freq;

use super::eval::Evaluator;

pub const LATTICE_AVERAGE_MAX_Q: u64 = 50;

/// Δ(m, n): 2 when at least two m_i vanish, else 2 ∏_{m_i ≠ 0} m_i n_i^{[n_i ≠ 0]}.
pub fn delta_monomial(f: &Freq) -> i128 {
    if f.m.iter().filter(|&&v| v == 0).count() >= 2 {
        return 2;
    }
    let mut d = 2i128;
    for i in 0..3 {
        if f.m[i] != 0 {
            d *= f.m[i] as i128;
            if f.n[i] != 0 {
                d *= f.n[i] as i128;
            }
        }
    }
    d
}

/// The integers a whose symbols (a/·) enter Ξ, one per active modulus variable.
pub fn active_characters(f: &Freq) -> Vec<i128> {
    let (m, n) = (f.m, f.n);
    let mut out = Vec::new();
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        if m[i] != 0 && m[j] != 0 && m[k] != 0 && n[i] != 0 && n[j] != 0 && n[k] == 0 {
            out.push(m[i] as i128 * m[k] as i128);
        }
    }
    for (j, k) in [(0, 1), (0, 2), (1, 2)] {
        if m[j] != 0 && m[k] != 0 && n[j] == 0 && n[k] == 0 {
            out.push(m[j] as i128 * m[k] as i128);
        }
    }
    out
}

/// Ξ_{p^l} for l = 0..=r: complete homogeneous sums of the active symbols at p.
pub fn xi_prime_power_list(p: u64, r: u32, f: &Freq) -> Vec<BigInt> {
    let mut h = vec![BigInt::zero(); r as usize + 1];
    h[0] = BigInt::one();
    if rem(delta_monomial(f), p) == 0 {
        return h;
    }
    for a in active_characters(f) {
        let chi = legendre(a, p);
        for l in 1..=r as usize {
            let prev = h[l - 1].clone();
            h[l] += prev * chi;
        }
    }
    h
}

pub fn xi(q: u64, f: &Freq) -> Result<BigInt> {
    let fq = factor(q)?;
    Ok(fq.factors().iter().map(|&(p, r)| xi_prime_power_list(p, r, f)[r as usize].clone()).product())
}

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// S′_{p^l} for l = 0..=r, from S_{p^l}/p^{4l} = Σ_{k ≤ l} (φ(p^k)/p^k) S′_{p^{l−k}}.
fn s_prime_list(ev: &mut Evaluator, p: u64, r: u32, f: &Freq) -> Result<Vec<BigRational>> {
    let pb = BigInt::from(p);
    let c = rat(&pb - 1, pb.clone());
    let mut out: Vec<BigRational> = vec![BigRational::one()];
    for l in 1..=r {
        let s = ev.prime_power_value(p, l, f)?.0;
        let mut v = rat(s, pb.pow(4 * l));
        for k in 1..=l {
            v -= &c * &out[(l - k) as usize];
        }
        out.push(v);
    }
    Ok(out)
}

fn s_double_prime_list(sp: &[BigRational], xi: &[BigInt]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(sp.len());
    for l in 0..sp.len() {
        let mut v = sp[l].clone();
        for k in 1..=l {
            v -= BigRational::from_integer(xi[k].clone()) * &out[l - k];
        }
        out.push(v);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualDecomposition {
    pub q: FactoredModulus,
    pub delta: i128,
    /// S′_q as "num/den".
    pub s_prime: String,
    pub s_double_prime: String,
    /// (d, Ξ_d) for every divisor d of q.
    pub xi: Vec<(u64, String)>,
    #[serde(skip)]
    pub exact: DualExact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualExact {
    pub s_prime: BigRational,
    pub s_double_prime: BigRational,
    pub xi: Vec<(u64, BigInt)>,
}

/// Splits S_q/q⁴ on the dual variety into φ(q₀)/q₀, Ξ and S″ factors.
pub fn dual_decomposition(ev: &mut Evaluator, q: u64, f: &Freq) -> Result<DualDecomposition> {
    if dual_form(f) != 0 {
        return invalid(format!("dual decomposition needs D(m, n) = 0, got {}", dual_form(f)));
    }
    let fq = factor(q)?;
    let mut sp = BigRational::one();
    let mut spp = BigRational::one();
    for &(p, r) in fq.factors() {
        let s1 = s_prime_list(ev, p, r, f)?;
        let x = xi_prime_power_list(p, r, f);
        let s2 = s_double_prime_list(&s1, &x);
        sp *= &s1[r as usize];
        spp *= &s2[r as usize];
    }
    let xi_list: Vec<(u64, BigInt)> = fq.divisors().into_iter().map(|d| Ok((d, xi(d, f)?))).collect::<Result<_>>()?;
    Ok(DualDecomposition {
        q: fq,
        delta: delta_monomial(f),
        s_prime: sp.to_string(),
        s_double_prime: spp.to_string(),
        xi: xi_list.iter().map(|(d, v)| (*d, v.to_string())).collect(),
        exact: DualExact { s_prime: sp, s_double_prime: spp, xi: xi_list },
    })
}

/// S′_q(m, n); defined for any (m, n), no dual condition needed.
pub fn s_prime(ev: &mut Evaluator, q: u64, f: &Freq) -> Result<BigRational> {
    let fq = factor(q)?;
    let mut v = BigRational::one();
    for &(p, r) in fq.factors() {
        v *= &s_prime_list(ev, p, r, f)?[r as usize];
        if v.is_zero() {
            break;
        }
    }
    Ok(v)
}

/// S″_p for a prime p.
pub fn s_double_prime_at_prime(ev: &mut Evaluator, p: u64, f: &Freq) -> Result<BigRational> {
    let s1 = s_prime_list(ev, p, 1, f)?;
    let x = xi_prime_power_list(p, 1, f);
    Ok(s_double_prime_list(&s1, &x).pop().unwrap())
}

/// Exact mean of S′_q over Λ⊥(t)/qΛ⊥(t).
pub fn lattice_average_s_prime(q: u64, t: [i64; 3]) -> Result<BigRational> {
    if q == 0 || q > LATTICE_AVERAGE_MAX_Q {
        return guard(format!("lattice average needs 1 <= q <= {LATTICE_AVERAGE_MAX_Q}"));
    }
    if t.iter().any(|v| v.abs() > 10) {
        return guard("lattice average needs |t| <= 10");
    }
    let basis = lambda_perp_basis(t)?;
    let mut ev = Evaluator::new();
    let qi = q as i64;
    let mut total = BigRational::zero();
    for a in 0..qi {
        for b in 0..qi {
            for c in 0..qi {
                let v = basis.combination([a, b, c]).map(|x| x.rem_euclid(qi));
                total += s_prime(&mut ev, q, &Freq::from_array(v))?;
            }
        }
    }
    Ok(total / BigRational::from_integer(BigInt::from(q).pow(3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{jacobi, phi};
    use crate::dualgeom::enumerate_dual_points;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Ξ_q from the literal sum over ordered factorizations q = ∏ q_c, one per active symbol.
    fn xi_literal(q: u64, f: &Freq) -> BigInt {
        let delta = delta_monomial(f);
        if crate::arith::gcd(q as i128, delta) != 1 {
            return BigInt::zero();
        }
        fn rec(q: u64, chars: &[i128]) -> i64 {
            match chars.split_first() {
                None => (q == 1) as i64,
                Some((&a, rest)) => (1..=q)
                    .filter(|d| q % d == 0)
                    .map(|d| jacobi(a, d as i128).unwrap() as i64 * rec(q / d, rest))
                    .sum(),
            }
        }
        BigInt::from(rec(q, &active_characters(f)))
    }

    fn sample_points() -> Vec<Freq> {
        let pts = enumerate_dual_points(6).unwrap();
        let step = pts.len() / 17;
        let mut out: Vec<Freq> = pts.iter().step_by(step).map(|(f, _)| *f).take(17).collect();
        out.push(Freq::new([2, 2, 2], [1, 1, -2]));
        out.push(Freq::new([1, 4, 9], [0, 0, 0]));
        out.push(Freq::new([1, 1, 4], [2, -2, 0]));
        out
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_monomial(&Freq::new([2, 2, 2], [1, 1, -2])), -32);
        assert_eq!(delta_monomial(&Freq::new([0, 0, 3], [0, 0, 0])), 2);
        assert_eq!(delta_monomial(&Freq::new([0, 1, 1], [1, 2, -2])), -8);
        for (f, _) in enumerate_dual_points(5).unwrap() {
            assert!(delta_monomial(&f) != 0);
        }
    }

    #[test]
    fn xi_matches_literal_convolution() {
        for f in sample_points() {
            for q in 1..=120u64 {
                assert_eq!(xi(q, &f).unwrap(), xi_literal(q, &f), "q={q} {f}");
            }
        }
    }

    #[test]
    fn example_values() {
        let mut ev = Evaluator::new();
        let f = Freq::new([2, 2, 2], [1, 1, -2]);
        let d = dual_decomposition(&mut ev, 1, &f).unwrap();
        assert_eq!(d.exact.s_prime, r(1, 1));
        assert_eq!(d.exact.s_double_prime, r(1, 1));
        // S_5 = 5⁴ − 4·5³, so S′_5 = 1/5 − 4/5; no active symbol, so S″_5 = S′_5.
        let d = dual_decomposition(&mut ev, 5, &f).unwrap();
        assert_eq!(d.exact.s_prime, r(-3, 5));
        assert_eq!(d.exact.s_double_prime, r(-3, 5));
        assert_eq!(d.s_prime, "-3/5");
        assert!(dual_decomposition(&mut ev, 5, &Freq::new([1; 3], [1; 3])).is_err());
    }

    #[test]
    fn reconstruction_identity() {
        let mut ev = Evaluator::new();
        for f in sample_points() {
            for q in 1..=200u64 {
                let fq = factor(q).unwrap();
                let mut total = BigRational::zero();
                for q0 in fq.divisors() {
                    let rest = factor(q / q0).unwrap();
                    for q1 in rest.divisors() {
                        let q2 = q / q0 / q1;
                        let spp = dual_decomposition(&mut ev, q2, &f).unwrap().exact.s_double_prime;
                        total += r(phi(q0) as i64, q0 as i64) * BigRational::from_integer(xi_literal(q1, &f)) * spp;
                    }
                }
                let s = ev.s_q(q, &f).unwrap().0;
                assert_eq!(total, BigRational::new(s, BigInt::from(q).pow(4)), "q={q} {f}");
            }
        }
    }

    #[test]
    fn s_double_prime_small_at_primes() {
        let mut ev = Evaluator::new();
        let mut sup_generic = 0.0f64;
        for (f, _) in enumerate_dual_points(4).unwrap() {
            for p in crate::arith::primes_up_to(60) {
                let v = s_double_prime_at_prime(&mut ev, p, &f).unwrap();
                let x = num_traits::ToPrimitive::to_f64(&v).unwrap().abs();
                if rem(delta_monomial(&f), p) != 0 {
                    sup_generic = sup_generic.max(x * p as f64);
                } else {
                    assert!(x <= 8.0, "p={p} {f}");
                }
            }
        }
        assert!(sup_generic <= 8.0, "{sup_generic}");
    }

    #[test]
    fn lattice_average() {
        assert_eq!(lattice_average_s_prime(1, [1, 1, 1]).unwrap(), r(1, 1));
        assert_eq!(lattice_average_s_prime(2, [1, 1, 1]).unwrap(), r(0, 1));
        assert_eq!(lattice_average_s_prime(9, [1, 0, 1]).unwrap(), r(0, 1));
        for (q, t) in [(3, [1, 2, 3]), (4, [0, 1, 1]), (5, [1, -1, 2]), (6, [2, 1, 1]), (8, [1, 1, 1]), (7, [3, 0, 1])] {
            assert_eq!(lattice_average_s_prime(q, t).unwrap(), r(0, 1), "q={q} t={t:?}");
        }
        assert!(lattice_average_s_prime(51, [1, 1, 1]).is_err());
        assert!(lattice_average_s_prime(2, [2, 2, 2]).is_err());
    }
}
