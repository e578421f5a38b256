use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, rem, v_p_or_inf, FactoredModulus};
use crate::dualgeom::g_form;
use crate::error::Result;
use crate::freq::{ExpSumValue, Freq};

use super::closed::qfrak;
use super::eval::Evaluator;

/// S⁽¹⁾ at a prime power: −p³𝔔(m,p) at p ∤ G when r = 1, zero for r ≥ 2.
pub fn s1_prime_power(p: u64, r: u32, f: &Freq) -> BigInt {
    match r {
        0 => BigInt::from(1),
        1 if rem(g_form(f), p) != 0 => -BigInt::from(p).pow(3) * qfrak(f.m, p),
        _ => BigInt::from(0),
    }
}

pub fn s1(q: u64, f: &Freq) -> Result<ExpSumValue> {
    let fq = factor(q)?;
    let mut v = BigInt::from(1);
    for &(p, r) in fq.factors() {
        v *= s1_prime_power(p, r, f);
    }
    Ok(ExpSumValue(v))
}

/// S⁽²⁾_{p^r} = S_{p^r} + Σ_{j=1}^{r} (𝔔 p³)^j S_{p^{r−j}} · 1_{p∤G}.
pub fn s2_prime_power(ev: &mut Evaluator, p: u64, r: u32, f: &Freq) -> Result<BigInt> {
    let mut v = if r == 0 { BigInt::from(1) } else { ev.prime_power_value(p, r, f)?.0 };
    if rem(g_form(f), p) != 0 {
        let base = BigInt::from(p).pow(3) * qfrak(f.m, p);
        let mut pow = BigInt::from(1);
        for j in 1..=r {
            pow *= &base;
            let lower = if r - j == 0 { BigInt::from(1) } else { ev.prime_power_value(p, r - j, f)?.0 };
            v += &pow * lower;
        }
    }
    Ok(v)
}

pub fn s2_with(ev: &mut Evaluator, q: u64, f: &Freq) -> Result<ExpSumValue> {
    let fq = factor(q)?;
    let mut v = BigInt::from(1);
    for &(p, r) in fq.factors() {
        v *= s2_prime_power(ev, p, r, f)?;
    }
    Ok(ExpSumValue(v))
}

pub fn s2(q: u64, f: &Freq) -> Result<ExpSumValue> {
    s2_with(&mut Evaluator::new(), q, f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum S2Reason {
    NotDividingG,
    ExponentTooHigh,
    Nonzero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct S2Support {
    pub q: FactoredModulus,
    pub g: i128,
    pub vanishes: bool,
    pub reason: S2Reason,
}

/// Predicts vanishing of S⁽²⁾_q from p ∤ G or r ≥ 2 + v_p(G) at some p^r ∥ q.
pub fn s2_support(q: u64, f: &Freq) -> Result<S2Support> {
    let fq = factor(q)?;
    let g = g_form(f);
    let mut reason = S2Reason::Nonzero;
    for &(p, r) in fq.factors() {
        let v = v_p_or_inf(g, p);
        if v == 0 {
            reason = S2Reason::NotDividingG;
            break;
        }
        if v != u32::MAX && r >= 2 + v {
            reason = S2Reason::ExponentTooHigh;
            break;
        }
    }
    Ok(S2Support { q: fq, g, vanishes: reason != S2Reason::Nonzero, reason })
}

/// Σ_{q1 q2 = q} S⁽¹⁾_{q1} S⁽²⁾_{q2}, summed over all divisor pairs.
pub fn convolution_check(ev: &mut Evaluator, q: u64, f: &Freq) -> Result<(BigInt, BigInt)> {
    let fq = factor(q)?;
    let mut total = BigInt::from(0);
    for q1 in fq.divisors() {
        let a = s1(q1, f)?.0;
        if a == BigInt::from(0) {
            continue;
        }
        total += a * s2_with(ev, q / q1, f)?.0;
    }
    Ok((total, ev.s_q(q, f)?.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let one = Freq::new([1; 3], [1; 3]);
        assert_eq!(s1(1, &one).unwrap(), ExpSumValue::from(1));
        assert_eq!(s1(7, &one).unwrap(), ExpSumValue::from(-1372));
        assert_eq!(s1(4, &one).unwrap(), ExpSumValue::from(0));
        assert_eq!(s2(7, &one).unwrap(), ExpSumValue::from(0));
        assert_eq!(s2(27, &one).unwrap(), ExpSumValue::from(0));
        assert_eq!(s2(1, &one).unwrap(), ExpSumValue::from(1));
        // v_3(G) = 2, so L4 needs r >= 4; S⁽²⁾_27 = S_27 = 0 by the square-full support.
        assert!(!s2_support(27, &one).unwrap().vanishes);
        let sup = s2_support(81, &one).unwrap();
        assert!(sup.vanishes);
        assert_eq!(sup.reason, S2Reason::ExponentTooHigh);
        assert_eq!(s2(81, &one).unwrap(), ExpSumValue::from(0));
        assert_eq!(s2_support(7, &one).unwrap().reason, S2Reason::NotDividingG);
    }

    #[test]
    fn s1_size_bound() {
        for q in 1..300u64 {
            for f in Freq::boxed(1).step_by(37) {
                let v = s1(q, &f).unwrap().0;
                let bound = BigInt::from(q).pow(3) * BigInt::from(4u64.pow(crate::arith::omega(q)));
                assert!(v.magnitude() <= bound.magnitude());
            }
        }
    }

    #[test]
    fn convolution_reconstructs_on_small_moduli() {
        let mut ev = Evaluator::new();
        for q in 1..=60u64 {
            for f in Freq::boxed(1).step_by(23) {
                let (lhs, rhs) = convolution_check(&mut ev, q, &f).unwrap();
                assert_eq!(lhs, rhs, "q={q} {f}");
            }
        }
    }
}
