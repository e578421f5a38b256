use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::gcd;
use crate::densities::{Kahan, WeightSpec};
use crate::dualgeom::for_each_kernel_point_in_box;
use crate::error::{guard, invalid, Result};

pub const COUNT_MAX_B: u32 = 1024;
pub const NAIVE_COUNT_MAX_B: u32 = 16;
pub const DEFAULT_STRATUM_EXPONENT: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratum {
    /// gcd(y1, y2, y3) range, lower end exclusive.
    pub gcd_above: f64,
    pub gcd_at_most: f64,
    pub weighted: f64,
    pub raw: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub b: u32,
    pub weight: WeightSpec,
    pub weighted_count: f64,
    pub raw_count: u64,
    pub theta: f64,
    pub strata: Vec<Stratum>,
    pub wall_time_s: f64,
}

impl CountReport {
    /// Share of the weighted count carried by gcd(y) > B^θ.
    pub fn upper_share(&self) -> f64 {
        self.strata[1].weighted / self.weighted_count
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.b,
            self.weighted_count,
            self.raw_count,
            self.strata[0].weighted,
            self.strata[0].raw,
            self.strata[1].weighted,
            self.strata[1].raw
        )
    }

    pub const CSV_HEADER: &'static str = "B,weighted,raw,lower_weighted,lower_raw,upper_weighted,upper_raw";
}

/// Integer support of W((x, y)/B): |x_i| ≤ xb and ylo ≤ |y_i| ≤ yhi.
#[derive(Debug, Clone, Copy)]
struct Support {
    xb: i64,
    ylo: i64,
    yhi: i64,
    hr: f64,
}

fn support(b: u32, w: &WeightSpec) -> Support {
    let hr = b as f64 * w.scale;
    Support { xb: hr.ceil() as i64 - 1, ylo: (w.delta0 * hr).floor() as i64 + 1, yhi: hr.ceil() as i64 - 1, hr }
}

fn check(b: u32, w: &WeightSpec, theta: f64) -> Result<()> {
    w.validate()?;
    if !(0.0..=1.0).contains(&theta) {
        return invalid("stratum exponent must lie in [0, 1]");
    }
    if b == 0 {
        return invalid("B must be positive");
    }
    let est = (b as f64 * w.scale).powi(3) / 6.0;
    if b > COUNT_MAX_B || est > 2e8 {
        return guard(format!("count at B = {b} needs about {est:.2e} lattice walks (B <= {COUNT_MAX_B})"));
    }
    Ok(())
}

#[derive(Default, Clone, Copy)]
struct Acc {
    weighted: [Kahan; 2],
    raw: [u64; 2],
}

fn report(b: u32, w: &WeightSpec, theta: f64, acc: Acc, start: Instant) -> CountReport {
    let cut = (b as f64).powf(theta);
    let strata = vec![
        Stratum { gcd_above: 0.0, gcd_at_most: cut, weighted: acc.weighted[0].value(), raw: acc.raw[0] },
        Stratum { gcd_above: cut, gcd_at_most: f64::INFINITY, weighted: acc.weighted[1].value(), raw: acc.raw[1] },
    ];
    CountReport {
        b,
        weight: *w,
        weighted_count: strata[0].weighted + strata[1].weighted,
        raw_count: acc.raw[0] + acc.raw[1],
        theta,
        strata,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}

/// N(B) = Σ_{F(x, y) = 0} W((x, y)/B) by walking, for each y with sorted positive coordinates,
/// the plane lattice {x : Σ y_i² x_i = 0} inside the box. Sign changes of y and permutations of
/// the (x_i, y_i) pairs leave F and W invariant and are counted by multiplicity.
pub fn count_gcd_strata(b: u32, w: &WeightSpec, theta: f64) -> Result<CountReport> {
    check(b, w, theta)?;
    let start = Instant::now();
    let s = support(b, w);
    let cut = (b as f64).powf(theta);
    let u: Vec<f64> = (-s.xb..=s.xb).map(|x| w.u(x as f64 / s.hr)).collect();
    let v: Vec<f64> = (0..=s.yhi).map(|y| w.v(y as f64 / s.hr)).collect();
    let blocks: Vec<Acc> = (s.ylo..=s.yhi)
        .into_par_iter()
        .map(|y1| {
            let mut acc = Acc::default();
            for y2 in y1..=s.yhi {
                for y3 in y2..=s.yhi {
                    let perms = if y1 == y3 {
                        1.0
                    } else if y1 == y2 || y2 == y3 {
                        3.0
                    } else {
                        6.0
                    };
                    let mult = 8.0 * perms;
                    let g = gcd(gcd(y1 as i128, y2 as i128) as i128, y3 as i128) as f64;
                    let stratum = usize::from(g > cut);
                    let mut sum = 0.0;
                    let mut raw = 0u64;
                    for_each_kernel_point_in_box([y1 * y1, y2 * y2, y3 * y3], s.xb, |x| {
                        raw += 1;
                        sum += u[(x[0] + s.xb) as usize] * u[(x[1] + s.xb) as usize] * u[(x[2] + s.xb) as usize];
                    });
                    let vp = v[y1 as usize] * v[y2 as usize] * v[y3 as usize];
                    acc.weighted[stratum].add(mult * vp * sum);
                    acc.raw[stratum] += mult as u64 * raw;
                }
            }
            acc
        })
        .collect();
    let mut total = Acc::default();
    for a in &blocks {
        for k in 0..2 {
            total.weighted[k].add(a.weighted[k].value());
            total.raw[k] += a.raw[k];
        }
    }
    Ok(report(b, w, theta, total, start))
}

pub fn count_weighted(b: u32, w: &WeightSpec) -> Result<CountReport> {
    count_gcd_strata(b, w, DEFAULT_STRATUM_EXPONENT)
}

/// Full-box scan over (y, x1, x2) solving for x3, for B ≤ 16.
pub fn count_weighted_naive(b: u32, w: &WeightSpec, theta: f64) -> Result<CountReport> {
    check(b, w, theta)?;
    if b > NAIVE_COUNT_MAX_B {
        return guard(format!("naive count needs B <= {NAIVE_COUNT_MAX_B}"));
    }
    let start = Instant::now();
    let s = support(b, w);
    let cut = (b as f64).powf(theta);
    let ys: Vec<i64> = (s.ylo..=s.yhi).flat_map(|y| [y, -y]).collect();
    let mut acc = Acc::default();
    for &y1 in &ys {
        for &y2 in &ys {
            for &y3 in &ys {
                let g = gcd(gcd(y1 as i128, y2 as i128) as i128, y3 as i128) as f64;
                let stratum = usize::from(g > cut);
                let c = y3 * y3;
                for x1 in -s.xb..=s.xb {
                    for x2 in -s.xb..=s.xb {
                        let r = -(x1 * y1 * y1 + x2 * y2 * y2);
                        if r % c != 0 || (r / c).abs() > s.xb {
                            continue;
                        }
                        let z = [x1, x2, r / c, y1, y2, y3].map(|v| v as f64 / b as f64);
                        acc.weighted[stratum].add(w.eval(z));
                        acc.raw[stratum] += 1;
                    }
                }
            }
        }
    }
    Ok(report(b, w, theta, acc, start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::Profile;

    #[test]
    fn matches_naive_scan() {
        let plateau = WeightSpec::new(0.25, 1.0, Profile::Plateau).unwrap();
        for b in [1u32, 4, 7, 12, 16] {
            for w in [WeightSpec::default(), plateau] {
                let fast = count_gcd_strata(b, &w, 0.5).unwrap();
                let slow = count_weighted_naive(b, &w, 0.5).unwrap();
                assert_eq!(fast.raw_count, slow.raw_count, "B={b}");
                for k in 0..2 {
                    assert_eq!(fast.strata[k].raw, slow.strata[k].raw);
                    let (a, c) = (fast.strata[k].weighted, slow.strata[k].weighted);
                    assert!((a - c).abs() <= 1e-12 * c.max(1e-300), "B={b} {a} {c}");
                }
            }
        }
    }

    #[test]
    fn strata_sum_and_empty_top() {
        let r = count_gcd_strata(40, &WeightSpec::default(), 0.75).unwrap();
        let s: f64 = r.strata.iter().map(|s| s.weighted).sum();
        assert!((s - r.weighted_count).abs() <= 1e-12 * r.weighted_count);
        assert_eq!(r.strata.iter().map(|s| s.raw).sum::<u64>(), r.raw_count);
        let top = count_gcd_strata(40, &WeightSpec::default(), 1.0).unwrap();
        assert_eq!(top.strata[1].raw, 0);
        assert!(r.upper_share() > 0.0 && r.upper_share() < 1.0);
    }

    #[test]
    fn per_y_counts_are_invariant_under_symmetries() {
        // x → −x and simultaneous permutations of (x_i, y_i)
        for y in [[3i64, 5, 7], [4, 6, 6], [9, 12, 15]] {
            let mut pts = Vec::new();
            for_each_kernel_point_in_box(y.map(|v| v * v), 30, |x| pts.push(x));
            let neg: Vec<[i64; 3]> = pts.iter().map(|x| x.map(|v| -v)).collect();
            assert!(neg.iter().all(|x| pts.contains(x)));
            let mut n = 0;
            for_each_kernel_point_in_box([y[2] * y[2], y[0] * y[0], y[1] * y[1]], 30, |_| n += 1);
            assert_eq!(n, pts.len());
        }
    }

    #[test]
    fn deterministic_and_guarded() {
        let a = count_weighted(48, &WeightSpec::default()).unwrap();
        let b = count_weighted(48, &WeightSpec::default()).unwrap();
        assert_eq!(a.weighted_count.to_bits(), b.weighted_count.to_bits());
        assert!(count_weighted(2000, &WeightSpec::default()).is_err());
        assert!(count_weighted_naive(17, &WeightSpec::default(), 0.75).is_err());
    }
}
