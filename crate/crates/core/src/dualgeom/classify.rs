use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{invalid, Result};
use crate::freq::Freq;

use super::forms::dual_form;
use super::lattice::invariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DualClass {
    /// m1 m2 m3 n1 n2 n3 ≠ 0 and (m, n) ∈ Λ⊥(t).
    AllGeneric { t: [i64; 3] },
    /// m_i n_i = 0 for the single index i (0-based), with t_i = 0.
    MixedZero { i: usize, t: [i64; 3] },
    /// m_i n_i = 0 for every i.
    CoordinateDegenerate,
    OffDual,
}

impl DualClass {
    pub fn t(&self) -> Option<[i64; 3]> {
        match *self {
            DualClass::AllGeneric { t } | DualClass::MixedZero { t, .. } => Some(t),
            _ => None,
        }
    }
}

/// Sign-normalized representative: first nonzero coordinate positive.
pub fn normalize_t(t: [i64; 3]) -> [i64; 3] {
    match t.iter().find(|&&v| v != 0) {
        Some(&v) if v < 0 => t.map(|x| -x),
        _ => t,
    }
}

fn isqrt(n: u128) -> Option<u128> {
    let r = (n as f64).sqrt().round() as u128;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == n)
}

fn squarefree_part(mut n: u128) -> u128 {
    let mut out = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * n
}

pub fn classify_dual_point(f: &Freq) -> Result<DualClass> {
    if f.is_zero() {
        return invalid("classify_dual_point needs (m, n) ≠ 0");
    }
    if dual_form(f) != 0 {
        return Ok(DualClass::OffDual);
    }
    let mn: Vec<usize> = (0..3).filter(|&i| f.m[i] as i128 * f.n[i] as i128 == 0).collect();
    if mn.len() == 3 {
        return Ok(DualClass::CoordinateDegenerate);
    }
    for (j, k) in [(0, 1), (0, 2), (1, 2)] {
        if f.m[j] != 0 && f.m[k] != 0 && f.n[j] != 0 && f.n[k] != 0 {
            let prod = f.m[j] as i128 * f.m[k] as i128;
            if prod < 0 || isqrt(prod as u128).is_none() {
                return Err(invariant(format!("m_{j} m_{k} not a square at {f}")));
            }
        }
    }
    if mn.len() >= 2 {
        return Err(invariant(format!("two coordinates with m_i n_i = 0 on the dual at {f}")));
    }
    if mn.is_empty() {
        return all_generic(f);
    }
    mixed_zero(f, mn[0])
}

fn all_generic(f: &Freq) -> Result<DualClass> {
    let sf = squarefree_part(f.m[0].unsigned_abs() as u128);
    let mut tabs = [0i64; 3];
    for i in 0..3 {
        let a = f.m[i].unsigned_abs() as u128;
        let s = if a % sf == 0 { isqrt(a / sf) } else { None };
        tabs[i] = s.ok_or_else(|| invariant(format!("m not of the form h t² at {f}")))? as i64;
    }
    let g = gcd(gcd(tabs[0] as i128, tabs[1] as i128) as i128, tabs[2] as i128) as i64;
    let tabs = tabs.map(|v| v / g);
    let mut found = None;
    for signs in [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]] {
        let t = [0, 1, 2].map(|i| signs[i] * tabs[i]);
        let dot: i128 = (0..3).map(|i| t[i] as i128 * f.n[i] as i128).sum();
        if dot == 0 {
            if found.is_some() {
                return Err(invariant(format!("two lines through {f}")));
            }
            found = Some(t);
        }
    }
    let t = found.ok_or_else(|| invariant(format!("no line through {f}")))?;
    Ok(DualClass::AllGeneric { t: normalize_t(t) })
}

fn mixed_zero(f: &Freq, i: usize) -> Result<DualClass> {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let (nj, nk) = (f.n[j], f.n[k]);
    let g = gcd(nj as i128, nk as i128) as i64;
    let mut t = [0i64; 3];
    t[j] = -nk / g;
    t[k] = nj / g;
    let (tj2, tk2) = (t[j] as i128 * t[j] as i128, t[k] as i128 * t[k] as i128);
    let (mj, mk) = (f.m[j] as i128, f.m[k] as i128);
    if mj % tj2 != 0 || mk % tk2 != 0 || mj / tj2 != mk / tk2 {
        return Err(invariant(format!("(m_j, m_k) not on (t_j², t_k²)ℤ at {f}")));
    }
    Ok(DualClass::MixedZero { i, t: normalize_t(t) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgeom::lattice::{is_primitive, lambda_perp_basis};

    #[test]
    fn examples() {
        assert_eq!(classify_dual_point(&Freq::new([2, 2, 2], [1, 1, -2])).unwrap(), DualClass::AllGeneric { t: [1, 1, 1] });
        assert_eq!(classify_dual_point(&Freq::new([0, 1, 1], [1, 2, -2])).unwrap(), DualClass::MixedZero { i: 0, t: [0, 1, 1] });
        assert_eq!(classify_dual_point(&Freq::new([1, 0, 0], [0, 0, 5])).unwrap(), DualClass::CoordinateDegenerate);
        assert_eq!(classify_dual_point(&Freq::new([1; 3], [1; 3])).unwrap(), DualClass::OffDual);
        assert!(classify_dual_point(&Freq::ZERO).is_err());
    }

    #[test]
    fn mixed_zero_satisfies_lemma_conditions() {
        let f = Freq::new([0, 1, 1], [1, 2, -2]);
        let DualClass::MixedZero { i, t } = classify_dual_point(&f).unwrap() else { panic!() };
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        assert_eq!(t[i], 0);
        assert_eq!(f.m[j] * t[k] * t[k], f.m[k] * t[j] * t[j]);
        assert_eq!(f.n[j] * t[j] + f.n[k] * t[k], 0);
    }

    #[test]
    fn round_trip_on_perp_lattices() {
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                for c in -10i64..=10 {
                    let t = [a, b, c];
                    if !is_primitive(t) || normalize_t(t) != t {
                        continue;
                    }
                    let lp = lambda_perp_basis(t).unwrap();
                    for h in [-2i64, -1, 1, 3] {
                        for c1 in -4i64..=4 {
                            for c2 in -4i64..=4 {
                                let v = lp.combination([0, c1, c2]);
                                let f = Freq::new([h * t[0] * t[0], h * t[1] * t[1], h * t[2] * t[2]], [v[3], v[4], v[5]]);
                                if f.height() > 50 || f.n.contains(&0) {
                                    continue;
                                }
                                let class = classify_dual_point(&f).unwrap();
                                let want = if t.contains(&0) {
                                    DualClass::MixedZero { i: t.iter().position(|&x| x == 0).unwrap(), t }
                                } else {
                                    DualClass::AllGeneric { t }
                                };
                                assert_eq!(class, want, "{f}");
                            }
                        }
                    }
                }
            }
        }
    }
}
