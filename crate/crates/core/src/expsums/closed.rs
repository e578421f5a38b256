use num_bigint::BigInt;

use crate::arith::{factor, is_prime, legendre, rem};
use crate::dualgeom::dual_form;
use crate::error::{invalid, Result};
use crate::freq::{ExpSumValue, Freq};

use super::reduced::reduced_sum;

/// S_p(m, n) for a prime p ≥ 5 from the prime-modulus case table. Primes 2 and
/// 3 are delegated to the reduced sum.
pub fn closed_form_prime(p: u64, f: &Freq) -> Result<ExpSumValue> {
    if !is_prime(p) {
        return invalid(format!("closed_form_prime needs a prime, got {p}"));
    }
    if p < 5 {
        return reduced_sum(p, f);
    }
    Ok(ExpSumValue::from_i128(closed_form_value(p, f)))
}

pub(crate) fn closed_form_value(p: u64, f: &Freq) -> i128 {
    let pi = p as i128;
    let p3 = pi * pi * pi;
    let p4 = p3 * pi;
    let m = f.m.map(|v| rem(v as i128, p) as i128);
    let n = f.n.map(|v| rem(v as i128, p) as i128);
    let chi = |a: i128, b: i128| legendre(a * b, p);
    let dp = rem(dual_form(&Freq::new(m.map(|v| v as i64), n.map(|v| v as i64))), p) == 0;

    let zeros = m.iter().filter(|&&v| v == 0).count();
    if zeros == 0 {
        if chi(m[0], m[1]) != 1 || chi(m[1], m[2]) != 1 || chi(m[2], m[0]) != 1 {
            return 0;
        }
        if !dp {
            return -4 * p3;
        }
        if n.iter().all(|&v| v != 0) {
            return p4 - 4 * p3;
        }
        if n.iter().any(|&v| v != 0) {
            return 2 * p4 - 4 * p3;
        }
        return 4 * p4 - 4 * p3;
    }
    if zeros == 3 {
        return p4 - p3;
    }
    // i is the coordinate whose m-divisibility differs from the other two.
    let i = if zeros == 1 {
        (0..3).find(|&k| m[k] == 0).unwrap()
    } else {
        (0..3).find(|&k| m[k] != 0).unwrap()
    };
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    if m[i] != 0 {
        return if n[i] == 0 { p4 - p3 } else { -p3 };
    }
    let s = chi(m[j], m[k]);
    if s == -1 {
        return 0;
    }
    if n[j] == 0 && n[k] == 0 {
        return 2 * p4 - 2 * p3;
    }
    if dp {
        return p4 - 2 * p3;
    }
    -2 * p3
}

/// 𝔔(m, p) = 1 + (m1m2/p) + (m2m3/p) + (m3m1/p) for p ≥ 5, and 0 for p ∈ {2, 3}.
pub fn qfrak(m: [i64; 3], p: u64) -> i32 {
    if p < 5 {
        return 0;
    }
    let m = m.map(|v| v as i128);
    1 + legendre(m[0] * m[1], p) + legendre(m[1] * m[2], p) + legendre(m[2] * m[0], p)
}

/// S_{p^r}(0, 0) = p^{4r + 3⌊r/2⌋}(1 − 1/p), multiplied over q.
pub fn s_q_00(q: u64) -> Result<ExpSumValue> {
    let fq = factor(q)?;
    let mut v = BigInt::from(1);
    for &(p, r) in fq.factors() {
        let bp = BigInt::from(p);
        v *= bp.pow(4 * r + 3 * (r / 2) - 1) * BigInt::from(p - 1);
    }
    Ok(ExpSumValue(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsums::reduced::ReducedSum;

    #[test]
    fn examples() {
        assert_eq!(closed_form_prime(7, &Freq::new([1; 3], [1; 3])).unwrap(), ExpSumValue::from(-1372));
        assert_eq!(closed_form_prime(5, &Freq::new([1, 1, 2], [1; 3])).unwrap(), ExpSumValue::from(0));
        assert_eq!(closed_form_prime(5, &Freq::ZERO).unwrap(), ExpSumValue::from(500));
        assert_eq!(closed_form_prime(3, &Freq::new([1; 3], [1; 3])).unwrap(), ExpSumValue::from(-27));
        assert!(closed_form_prime(9, &Freq::ZERO).is_err());
        assert_eq!(qfrak([1, 1, 1], 5), 4);
        assert_eq!(qfrak([1, 1, 2], 5), 0);
        assert_eq!(qfrak([1, 1, 1], 3), 0);
        assert_eq!(s_q_00(8).unwrap(), ExpSumValue::from(16384));
        assert_eq!(s_q_00(10).unwrap(), ExpSumValue::from(4000));
        assert_eq!(s_q_00(1).unwrap(), ExpSumValue::from(1));
        assert_eq!(s_q_00(9).unwrap(), ExpSumValue::from(118098));
    }

    #[test]
    fn matches_reduced_sum_small_primes() {
        for p in [5u64, 7, 11, 13] {
            let rs = ReducedSum::new(p).unwrap();
            for f in Freq::boxed(2) {
                assert_eq!(closed_form_value(p, &f), rs.eval(&f).unwrap().0.try_into().unwrap(), "p={p} {f}");
            }
        }
    }

    #[test]
    fn qfrak_values() {
        for p in [5u64, 7, 11] {
            for m in Freq::boxed(1).map(|f| f.m) {
                assert!([0, 1, 2, 4].contains(&qfrak(m, p)));
            }
        }
    }
}
