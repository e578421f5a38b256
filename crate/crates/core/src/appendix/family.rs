use crate::arith::rem;
use crate::cyclo::RootSum;
use crate::error::{guard, Result};
use crate::freq::{ExpSumValue, Freq};

use super::check_odd_prime;
use super::gauss::{gauss_closed, GaussAcc};

pub const BRUTE_FAMILY_MAX_P: u64 = 13;
pub const FAMILY_MAX_P: u64 = 19;

fn reduce(c: i64, p: u64) -> u64 {
    rem(c as i128, p)
}

/// Σ_{a≠0, x, y} ψ^k(a F + m·x + n·y) for F = Σ x_i y_i² − c1 x1 x2 x3 − c2 y1 y2 y3, by direct
/// summation over 𝔽_p⁷ with ψ^k(t) = e_p(k t).
pub fn brute_family(p: u64, c1: i64, c2: i64, b: &Freq, k: u64) -> Result<i128> {
    check_odd_prime(p)?;
    if p > BRUTE_FAMILY_MAX_P {
        return guard(format!("definition scan needs p <= {BRUTE_FAMILY_MAX_P}"));
    }
    let (c1, c2) = (reduce(c1, p), reduce(c2, p));
    let m = b.m.map(|v| reduce(v, p));
    let n = b.n.map(|v| reduce(v, p));
    let mut counts = vec![0i64; p as usize];
    for a in 1..p {
        for x1 in 0..p {
            for x2 in 0..p {
                for x3 in 0..p {
                    let lin_x = (m[0] * x1 + m[1] * x2 + m[2] * x3) % p;
                    let cx = (p - c1 * x1 % p * x2 % p * x3 % p) % p;
                    for y1 in 0..p {
                        for y2 in 0..p {
                            for y3 in 0..p {
                                let cub = (x3 * y3 % p * y3 + cx + p * p - c2 * y1 % p * y2 % p * y3 % p) % p;
                                let f = (cub + x1 * y1 % p * y1 + x2 * y2 % p * y2) % p;
                                let lin = (lin_x + n[0] * y1 + n[1] * y2 + n[2] * y3) % p;
                                let e = (a * f + lin) % p * (k % p) % p;
                                counts[e as usize] += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut s = RootSum::new(p);
    for (e, &c) in counts.iter().enumerate() {
        s.add(e as u64, c);
    }
    s.to_integer()
}

/// The same sum in O(p⁶): the y3-sum is the Gauss sum G(a x3, n3 − a c2 y1 y2).
pub fn family_sum(p: u64, c1: i64, c2: i64, b: &Freq) -> Result<ExpSumValue> {
    check_odd_prime(p)?;
    if p > FAMILY_MAX_P {
        return guard(format!("family sums need p <= {FAMILY_MAX_P}"));
    }
    let (c1, c2) = (reduce(c1, p), reduce(c2, p));
    let m = b.m.map(|v| reduce(v, p));
    let n = b.n.map(|v| reduce(v, p));
    let mut acc = GaussAcc::new(p);
    for a in 1..p {
        for x1 in 0..p {
            for x2 in 0..p {
                for x3 in 0..p {
                    let base = (a * ((p - c1 * x1 % p * x2 % p * x3 % p) % p) + m[0] * x1 + m[1] * x2 + m[2] * x3) % p;
                    for y1 in 0..p {
                        let b1 = (base + a * x1 % p * y1 % p * y1 + n[0] * y1) % p;
                        for y2 in 0..p {
                            let e = (b1 + a * x2 % p * y2 % p * y2 + n[1] * y2) % p;
                            let lin = (n[2] + p - a * c2 % p * y1 % p * y2 % p) % p;
                            let (eg, cg, kg) = gauss_closed(p, a * x3 % p, lin);
                            acc.add(e + eg, cg, kg);
                        }
                    }
                }
            }
        }
    }
    Ok(ExpSumValue::from_i128(acc.finish()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appendix::s_p_f2;
    use crate::expsums::closed_form_prime;

    #[test]
    fn fast_family_matches_definition() {
        for (c1, c2) in [(-1, 0), (0, 0), (1, 1), (2, -1)] {
            for b in [Freq::ZERO, Freq::new([1, 2, 0], [1, 1, 2])] {
                for p in [3u64, 5] {
                    assert_eq!(family_sum(p, c1, c2, &b).unwrap().0, brute_family(p, c1, c2, &b, 1).unwrap().into(), "p={p} c=({c1},{c2}) {b}");
                }
            }
        }
    }

    #[test]
    fn special_members() {
        for p in [5u64, 7] {
            for b in [Freq::new([1, 1, 1], [1, 1, 1]), Freq::new([1, 2, 3], [2, 0, 1]), Freq::new([0, 0, 2], [1, 3, 1])] {
                assert_eq!(family_sum(p, -1, 0, &b).unwrap(), s_p_f2(p, &b).unwrap());
                assert_eq!(family_sum(p, 0, 0, &b).unwrap(), closed_form_prime(p, &b).unwrap());
            }
        }
    }
}
