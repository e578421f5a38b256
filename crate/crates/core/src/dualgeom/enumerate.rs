use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{guard, Result};
use crate::freq::Freq;

use super::classify::{normalize_t, DualClass};
use super::forms::dual_form;
use super::lattice::{for_each_kernel_point_in_box, is_primitive};

pub const LIST_MAX_M: i64 = 20;
pub const VISIT_MAX_M: i64 = 60;
pub const COUNT_MAX_M: i64 = 500;
pub const NAIVE_MAX_M: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DualCounts {
    pub m: i64,
    pub coordinate: u64,
    pub all_generic: u64,
    pub mixed_zero: u64,
}

impl DualCounts {
    pub fn total(&self) -> u64 {
        self.coordinate + self.all_generic + self.mixed_zero
    }
}

fn isqrt_floor(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primitive normalized t with every |t_i|² ≤ M and every t_i ≠ 0.
fn generic_lines(m: i64) -> Vec<[i64; 3]> {
    let r = isqrt_floor(m);
    let mut out = Vec::new();
    for a in 1..=r {
        for b in -r..=r {
            for c in -r..=r {
                if b != 0 && c != 0 && is_primitive([a, b, c]) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// (i, t) with t_i = 0, the other two nonzero, primitive, normalized, |t_j|² ≤ M.
fn mixed_lines(m: i64) -> Vec<(usize, [i64; 3])> {
    let r = isqrt_floor(m);
    let mut out = Vec::new();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        for a in -r..=r {
            for b in -r..=r {
                if a == 0 || b == 0 || crate::arith::gcd(a as i128, b as i128) != 1 {
                    continue;
                }
                let mut t = [0i64; 3];
                t[j] = a;
                t[k] = b;
                if normalize_t(t) == t {
                    out.push((i, t));
                }
            }
        }
    }
    out
}

fn visit_generic(m: i64, t: [i64; 3], visit: &mut impl FnMut(Freq, DualClass)) {
    let t2max = t.iter().map(|v| v * v).max().unwrap();
    let hmax = m / t2max;
    let mut ns = Vec::new();
    for_each_kernel_point_in_box(t, m, |n| {
        if !n.contains(&0) {
            ns.push(n);
        }
    });
    for h in (-hmax..=hmax).filter(|&h| h != 0) {
        let mm = t.map(|v| h * v * v);
        for &n in &ns {
            visit(Freq::new(mm, n), DualClass::AllGeneric { t });
        }
    }
}

fn visit_mixed(m: i64, i: usize, t: [i64; 3], visit: &mut impl FnMut(Freq, DualClass)) {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let hmax = m / (t[j] * t[j]).max(t[k] * t[k]);
    let smax = m / t[j].abs().max(t[k].abs());
    for h in (-hmax..=hmax).filter(|&h| h != 0) {
        for s in (-smax..=smax).filter(|&s| s != 0) {
            for (mi, ni) in coordinate_pairs(m) {
                let mut f = Freq::ZERO;
                f.m[j] = h * t[j] * t[j];
                f.m[k] = h * t[k] * t[k];
                f.n[j] = s * t[k];
                f.n[k] = -s * t[j];
                f.m[i] = mi;
                f.n[i] = ni;
                visit(f, DualClass::MixedZero { i, t });
            }
        }
    }
}

fn coordinate_pairs(m: i64) -> impl Iterator<Item = (i64, i64)> {
    (-m..=m).map(|v| (v, 0)).chain((-m..=m).filter(|&v| v != 0).map(|v| (0, v)))
}

/// Every nonzero (m, n) with |m|, |n| ≤ M and D(m, n) = 0, generated class by
/// class so that each point is produced exactly once.
pub fn for_each_dual_point(m: i64, mut visit: impl FnMut(Freq, DualClass)) -> Result<()> {
    if !(0..=VISIT_MAX_M).contains(&m) {
        return guard(format!("dual point visitor needs 0 <= M <= {VISIT_MAX_M}"));
    }
    let pairs: Vec<(i64, i64)> = coordinate_pairs(m).collect();
    for a in &pairs {
        for b in &pairs {
            for c in &pairs {
                let f = Freq::new([a.0, b.0, c.0], [a.1, b.1, c.1]);
                if !f.is_zero() {
                    visit(f, DualClass::CoordinateDegenerate);
                }
            }
        }
    }
    for t in generic_lines(m) {
        visit_generic(m, t, &mut visit);
    }
    for (i, t) in mixed_lines(m) {
        visit_mixed(m, i, t, &mut visit);
    }
    Ok(())
}

/// The sorted list (by height, then lexicographically) of dual points in the box.
pub fn enumerate_dual_points(m: i64) -> Result<Vec<(Freq, DualClass)>> {
    if !(0..=LIST_MAX_M).contains(&m) {
        return guard(format!("dual point listing needs 0 <= M <= {LIST_MAX_M}"));
    }
    let mut out = Vec::new();
    for_each_dual_point(m, |f, c| out.push((f, c)))?;
    out.sort_by_key(|(f, _)| (f.height(), *f));
    Ok(out)
}

/// Class counts up to M ≤ 500; coordinate points are counted in closed form.
pub fn count_dual_points(m: i64) -> Result<DualCounts> {
    if !(0..=COUNT_MAX_M).contains(&m) {
        return guard(format!("dual point count needs 0 <= M <= {COUNT_MAX_M}"));
    }
    let side = (4 * m + 1) as u64;
    let mut counts = DualCounts { m, coordinate: side * side * side - 1, ..Default::default() };
    for t in generic_lines(m) {
        let t2max = t.iter().map(|v| v * v).max().unwrap();
        let hs = 2 * (m / t2max) as u64;
        let mut ns = 0u64;
        for_each_kernel_point_in_box(t, m, |n| {
            if !n.contains(&0) {
                ns += 1;
            }
        });
        counts.all_generic += hs * ns;
    }
    for (i, t) in mixed_lines(m) {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let hs = 2 * (m / (t[j] * t[j]).max(t[k] * t[k])) as u64;
        let ss = 2 * (m / t[j].abs().max(t[k].abs())) as u64;
        counts.mixed_zero += hs * ss * side;
    }
    Ok(counts)
}

/// Direct scan of the box [−M, M]⁶.
pub fn naive_dual_points(m: i64) -> Result<Vec<Freq>> {
    if !(0..=NAIVE_MAX_M).contains(&m) {
        return guard(format!("naive dual scan needs 0 <= M <= {NAIVE_MAX_M}"));
    }
    Ok(Freq::boxed(m).filter(|f| !f.is_zero() && dual_form(f) == 0).collect())
}

/// Total number of nonzero dual points in the box, from D = a² + b² + c² − 2ab − 2bc − 2ca
/// with (a, b, c) = (m_i n_i²): for fixed (a, b) the admissible c are a + b ± 2√(ab).
pub fn count_dual_points_by_abc(m: i64) -> u64 {
    let mut mult: HashMap<i128, u64> = HashMap::new();
    for x in -m..=m {
        for y in -m..=m {
            *mult.entry(x as i128 * y as i128 * y as i128).or_default() += 1;
        }
    }
    let vals: Vec<(i128, u64)> = mult.iter().map(|(&k, &v)| (k, v)).collect();
    let mut total = 0u64;
    for &(a, ma) in &vals {
        for &(b, mb) in &vals {
            let ab = a * b;
            if ab < 0 {
                continue;
            }
            let r = (ab as f64).sqrt().round() as i128;
            let Some(r) = (r - 1..=r + 1).find(|&s| s >= 0 && s * s == ab) else { continue };
            let mut cs = vec![a + b + 2 * r];
            if r != 0 {
                cs.push(a + b - 2 * r);
            }
            for c in cs {
                if let Some(&mc) = mult.get(&c) {
                    total += ma * mb * mc;
                }
            }
        }
    }
    total - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgeom::classify_dual_point;

    #[test]
    fn lattice_enumeration_matches_naive_scan() {
        for m in [1i64, 2, 4, 10] {
            let listed: Vec<Freq> = {
                let mut v: Vec<Freq> = enumerate_dual_points(m).unwrap().into_iter().map(|(f, _)| f).collect();
                v.sort();
                v
            };
            let naive = naive_dual_points(m).unwrap();
            assert_eq!(listed, naive, "M={m}");
        }
    }

    #[test]
    fn classes_agree_with_classifier() {
        for (f, c) in enumerate_dual_points(12).unwrap() {
            assert_eq!(classify_dual_point(&f).unwrap(), c, "{f}");
        }
    }

    #[test]
    fn counts_agree_with_listing_and_abc_oracle() {
        for m in [1i64, 3, 7, 20] {
            let list = enumerate_dual_points(m).unwrap();
            let c = count_dual_points(m).unwrap();
            assert_eq!(c.total() as usize, list.len());
            let generic = list.iter().filter(|(_, c)| matches!(c, DualClass::AllGeneric { .. })).count();
            assert_eq!(c.all_generic as usize, generic);
            assert_eq!(c.total(), count_dual_points_by_abc(m), "M={m}");
        }
        for m in [35i64, 60] {
            assert_eq!(count_dual_points(m).unwrap().total(), count_dual_points_by_abc(m));
        }
    }

    #[test]
    fn generic_points_have_square_products() {
        for (f, c) in enumerate_dual_points(20).unwrap() {
            if let DualClass::AllGeneric { .. } = c {
                for (j, k) in [(0, 1), (0, 2), (1, 2)] {
                    let p = f.m[j] * f.m[k];
                    let r = (p as f64).sqrt().round() as i64;
                    assert!(p > 0 && r * r == p, "{f}");
                }
            }
        }
    }

    #[test]
    fn listing_is_sorted_and_small_case() {
        let l = enumerate_dual_points(1).unwrap();
        assert!(l.windows(2).all(|w| (w[0].0.height(), w[0].0) < (w[1].0.height(), w[1].0)));
        assert!(l.contains(&(Freq::new([1, 0, 0], [0, 0, 0]), DualClass::CoordinateDegenerate)));
        assert!(enumerate_dual_points(21).is_err());
    }
}
