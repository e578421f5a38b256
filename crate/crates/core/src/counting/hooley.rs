use std::collections::HashMap;

use serde::Serialize;

use crate::arith::hooley_delta;
use crate::error::{guard, invalid, Result};

pub const HOOLEY_MAX_T: u32 = 60;
/// Cap on the number of (a1, a2, a3) value triples visited.
pub const HOOLEY_MAX_TRIPLES: u64 = 60_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HooleyReport {
    pub t: u32,
    pub d: [u32; 3],
    /// Number of (m, n) in the box with d_i | m_i ≠ 0 and D(m, n) ≠ 0.
    pub terms: u128,
    /// Σ Δ(G(m, n)).
    pub s_delta0: u128,
    /// Σ Δ(G(m, n))².
    pub s_delta1: u128,
    /// S_T d1 d2 d3 / T⁶ at δ = 0 and δ = 1.
    pub ratio0: f64,
    pub ratio1: f64,
}

/// Multiplicities of a = m n² over d | m ≠ 0, |m|, |n| ≤ T.
fn values(t: i64, d: i64) -> Vec<(i128, u64)> {
    let mut h: HashMap<i128, u64> = HashMap::new();
    for k in 1..=t / d {
        for m in [d * k, -d * k] {
            for n in -t..=t {
                *h.entry(m as i128 * (n * n) as i128).or_default() += 1;
            }
        }
    }
    let mut v: Vec<(i128, u64)> = h.into_iter().collect();
    v.sort_unstable();
    v
}

/// S_T = Σ Δ(G(m, n))^{1+δ} over D(m, n) ≠ 0, d_i | m_i ≠ 0, |m|, |n| ≤ T, at δ ∈ {0, 1}.
/// G = 6D depends on (m, n) only through a_i = m_i n_i², so the box is compressed to value
/// multiplicities and Δ is memoized on |G|.
pub fn hooley_st(t: u32, d: [u32; 3]) -> Result<HooleyReport> {
    if t == 0 || t > HOOLEY_MAX_T || d.contains(&0) {
        return invalid(format!("hooley_st needs 1 <= T <= {HOOLEY_MAX_T} and positive d"));
    }
    let vals: Vec<Vec<(i128, u64)>> = d.iter().map(|&di| values(t as i64, di as i64)).collect();
    let triples = vals.iter().map(|v| v.len() as u64).product::<u64>();
    if triples > HOOLEY_MAX_TRIPLES {
        return guard(format!("S_T at T = {t} visits {triples} value triples (cap {HOOLEY_MAX_TRIPLES})"));
    }
    let mut memo: HashMap<i128, u32> = HashMap::new();
    let (mut terms, mut s0, mut s1) = (0u128, 0u128, 0u128);
    for &(a, ma) in &vals[0] {
        for &(b, mb) in &vals[1] {
            for &(c, mc) in &vals[2] {
                let dual = a * a + b * b + c * c - 2 * (a * b + b * c + c * a);
                if dual == 0 {
                    continue;
                }
                let g = (6 * dual).abs();
                let delta = *memo.entry(g).or_insert_with(|| hooley_delta(g)) as u128;
                let mult = (ma * mb * mc) as u128;
                terms += mult;
                s0 += mult * delta;
                s1 += mult * delta * delta;
            }
        }
    }
    let scale = d.iter().map(|&x| x as f64).product::<f64>() / (t as f64).powi(6);
    Ok(HooleyReport { t, d, terms, s_delta0: s0, s_delta1: s1, ratio0: s0 as f64 * scale, ratio1: s1 as f64 * scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgeom::{dual_form, g_form};
    use crate::Freq;

    fn by_definition(t: i64, d: [i64; 3]) -> (u128, u128, u128) {
        let (mut n, mut s0, mut s1) = (0, 0, 0);
        for f in Freq::boxed(t) {
            if (0..3).any(|i| f.m[i] == 0 || f.m[i] % d[i] != 0) || dual_form(&f) == 0 {
                continue;
            }
            let delta = hooley_delta(g_form(&f)) as u128;
            n += 1;
            s0 += delta;
            s1 += delta * delta;
        }
        (n, s0, s1)
    }

    #[test]
    fn matches_definition_scan() {
        for (t, d) in [(1u32, [1u32, 1, 1]), (2, [1, 1, 1]), (2, [2, 1, 1]), (3, [1, 3, 2])] {
            let r = hooley_st(t, d).unwrap();
            assert_eq!((r.terms, r.s_delta0, r.s_delta1), by_definition(t as i64, d.map(|x| x as i64)), "T={t} d={d:?}");
        }
    }

    #[test]
    fn monotone_in_t() {
        let mut prev = (0, 0);
        for t in 1..=7 {
            let r = hooley_st(t, [1, 1, 1]).unwrap();
            assert!(r.s_delta0 >= prev.0 && r.s_delta1 >= prev.1);
            assert!(r.s_delta1 >= r.s_delta0);
            prev = (r.s_delta0, r.s_delta1);
        }
    }

    #[test]
    fn guards() {
        assert!(hooley_st(0, [1, 1, 1]).is_err());
        assert!(hooley_st(61, [1, 1, 1]).is_err());
        assert!(hooley_st(40, [1, 1, 1]).is_err());
    }
}
