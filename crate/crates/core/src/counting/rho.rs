use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{invalid, Result};

pub const RHO_MAX_P: u64 = 13;
pub const RHO_AUDIT_CONSTANT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoCase {
    /// p ∤ d1 d2 d3: p⁵ + O(p^{9/2}).
    Coprime,
    /// p divides exactly one d_i: p⁵ + O(p⁴).
    OneDivisible,
    /// p divides exactly two d_i: 2p⁵ + O(p⁴).
    TwoDivisible,
    /// p divides every d_i; no prediction.
    AllDivisible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoReport {
    pub p: u64,
    pub d: [i64; 3],
    pub eps: [i8; 3],
    pub rho: u64,
    pub case: RhoCase,
    /// Predicted leading coefficient c in c·p⁵.
    pub c: u64,
    /// Exponent e of the error term p^e.
    pub err_power: f64,
    /// |ρ − c p⁵| / p^e.
    pub ratio: f64,
    pub within: bool,
}

fn check(p: u64, eps: [i8; 3]) -> Result<()> {
    if !is_prime(p) || p > RHO_MAX_P {
        return invalid(format!("rho_g needs a prime p <= {RHO_MAX_P}"));
    }
    if eps.iter().any(|&e| e != 1 && e != -1) {
        return invalid("signs must be ±1");
    }
    Ok(())
}

/// #{u ∈ 𝔽_p⁶ : G_d^ε(u) = 0}. With w_i = ε_i d_i x_i y_i², G = Σ w_i² − 2 Σ_{i<j} w_i w_j, so
/// the count is a p³ sum over histograms of the w_i.
pub fn rho_count(p: u64, d: [i64; 3], eps: [i8; 3]) -> Result<u64> {
    check(p, eps)?;
    let pi = p as i64;
    let hist: Vec<Vec<u64>> = (0..3)
        .map(|i| {
            let c = (eps[i] as i64 * d[i]).rem_euclid(pi);
            let mut h = vec![0u64; p as usize];
            for x in 0..pi {
                for y in 0..pi {
                    h[(c * x % pi * (y * y % pi) % pi) as usize] += 1;
                }
            }
            h
        })
        .collect();
    let mut rho = 0u64;
    for a in 0..pi {
        for b in 0..pi {
            let hab = hist[0][a as usize] * hist[1][b as usize];
            if hab == 0 {
                continue;
            }
            for c in 0..pi {
                let g = (a * a + b * b + c * c - 2 * (a * b + b * c + c * a)).rem_euclid(pi);
                if g == 0 {
                    rho += hab * hist[2][c as usize];
                }
            }
        }
    }
    Ok(rho)
}

pub fn rho_g(p: u64, d: [i64; 3], eps: [i8; 3]) -> Result<RhoReport> {
    let rho = rho_count(p, d, eps)?;
    let divisible = d.iter().filter(|&&di| di % p as i64 == 0).count();
    let (case, c, e) = match divisible {
        0 => (RhoCase::Coprime, 1, 4.5),
        1 => (RhoCase::OneDivisible, 1, 4.0),
        2 => (RhoCase::TwoDivisible, 2, 4.0),
        _ => (RhoCase::AllDivisible, 0, 6.0),
    };
    let pf = p as f64;
    let ratio = (rho as f64 - c as f64 * pf.powi(5)).abs() / pf.powf(e);
    let within = case != RhoCase::AllDivisible && ratio <= RHO_AUDIT_CONSTANT;
    Ok(RhoReport { p, d, eps, rho, case, c, err_power: e, ratio, within })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(p: i64, d: [i64; 3], eps: [i8; 3]) -> u64 {
        let mut n = 0;
        let g = |x: [i64; 3], y: [i64; 3]| {
            let mut s = 0i64;
            for i in 0..3 {
                s += d[i] * d[i] * x[i] * x[i] * y[i].pow(4);
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                s -= 2 * (eps[i] * eps[j]) as i64 * d[i] * d[j] * x[i] * x[j] * y[i] * y[i] * y[j] * y[j];
            }
            s.rem_euclid(p)
        };
        for code in 0..p.pow(6) {
            let mut c = code;
            let mut u = [0i64; 6];
            for v in &mut u {
                *v = c % p;
                c /= p;
            }
            if g([u[0], u[1], u[2]], [u[3], u[4], u[5]]) == 0 {
                n += 1;
            }
        }
        n
    }

    #[test]
    fn histogram_count_matches_direct_scan() {
        for (p, d, e) in [(5, [1, 1, 1], [1, 1, 1]), (5, [5, 1, 1], [1, -1, 1]), (3, [3, 3, 1], [1, 1, -1]), (7, [1, 2, 3], [-1, 1, 1])] {
            assert_eq!(rho_count(p as u64, d, e).unwrap(), brute(p, d, e), "p={p} d={d:?}");
        }
    }

    #[test]
    fn three_cases_within_audit_constant() {
        let r = rho_g(5, [1, 1, 1], [1, 1, 1]).unwrap();
        assert_eq!(r.case, RhoCase::Coprime);
        assert!(r.within);
        let r = rho_g(5, [5, 1, 1], [1, 1, 1]).unwrap();
        assert_eq!(r.case, RhoCase::OneDivisible);
        assert!(r.within);
        let r = rho_g(3, [3, 3, 1], [1, 1, 1]).unwrap();
        assert_eq!((r.case, r.c), (RhoCase::TwoDivisible, 2));
        assert!(r.within);
        assert!(rho_g(15, [1, 1, 1], [1, 1, 1]).is_err());
        assert!(rho_g(5, [1, 1, 1], [2, 1, 1]).is_err());
    }
}
