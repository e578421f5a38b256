use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{primes_up_to, rem};
use crate::dualgeom::g_form;
use crate::error::{guard, invalid, Result};
use crate::expsums::closed_form_prime;
use crate::freq::{ExpSumValue, Freq};

use super::f2::{conic_det, s_p_f2};
use super::family::{family_sum, FAMILY_MAX_P};

pub const SCAN_F_MAX_P: u64 = 199;
pub const SCAN_F_MAX_BOX: i64 = 4;
pub const SCAN_F2_MAX_P: u64 = 100;
pub const SCAN_F2_MAX_BOX: i64 = 3;
pub const SCAN_FAMILY_MAX_BOX: i64 = 2;
const WITNESSES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cubic {
    /// Σ x_i y_i².
    F,
    /// Σ x_i y_i² + x1 x2 x3.
    F2,
    /// Σ x_i y_i² − c1 x1 x2 x3 − c2 y1 y2 y3.
    Family { c1: i64, c2: i64 },
}

impl Cubic {
    fn locus_name(&self) -> &'static str {
        match self.normalized() {
            Cubic::F => "m1*m2*m3*G(m,n)",
            Cubic::F2 => "det(conic(m,n))*n1*n2*n3",
            Cubic::Family { .. } => "m1*m2*m3*n1*n2*n3",
        }
    }

    /// Family members with a dedicated evaluator.
    fn normalized(&self) -> Cubic {
        match *self {
            Cubic::Family { c1: 0, c2: 0 } => Cubic::F,
            Cubic::Family { c1: -1, c2: 0 } => Cubic::F2,
            c => c,
        }
    }

    fn locus(&self, p: u64, b: &Freq) -> bool {
        let pm = |v: i128| rem(v, p) == 0;
        let mn = |v: &[i64; 3]| v.iter().any(|&x| pm(x as i128));
        match self.normalized() {
            Cubic::F => mn(&b.m) || pm(g_form(b)),
            Cubic::F2 => mn(&b.n) || pm(conic_det(b)),
            Cubic::Family { .. } => mn(&b.m) || mn(&b.n),
        }
    }

    fn value(&self, p: u64, b: &Freq) -> Result<ExpSumValue> {
        match *self {
            Cubic::F => closed_form_prime(p, b),
            Cubic::F2 => s_p_f2(p, b),
            Cubic::Family { c1, c2 } => family_sum(p, c1, c2, b),
        }
    }

    /// Whether the sum is invariant under permuting the (x_i, y_i) pairs, n_i → −n_i and m → −m.
    fn has_full_symmetry(&self) -> bool {
        matches!(self, Cubic::F | Cubic::F2 | Cubic::Family { c2: 0, .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiamondWitness {
    pub p: u64,
    pub b: Freq,
    pub value: String,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiamondScanReport {
    pub cubic: Cubic,
    pub primes: (u64, u64),
    pub box_h: i64,
    pub locus: String,
    /// (p, b) pairs off the locus, counted with orbit multiplicity.
    pub cases: u64,
    pub excluded: u64,
    pub sup_ratio: f64,
    /// max |S_p(b)|/p³ as an exact fraction.
    pub sup_exact: String,
    pub witnesses: Vec<DiamondWitness>,
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn canonical(b: &Freq) -> Freq {
    let mut best = *b;
    for perm in PERMS {
        for signs in 0..8 {
            for ms in [1, -1] {
                let m = perm.map(|i| ms * b.m[i]);
                let n = [0, 1, 2].map(|k| if signs >> k & 1 == 1 { -b.n[perm[k]] } else { b.n[perm[k]] });
                let c = Freq::new(m, n);
                if c < best {
                    best = c;
                }
            }
        }
    }
    best
}

/// Orbit representatives of the box with their orbit sizes.
fn representatives(h: i64, symmetric: bool) -> Vec<(Freq, u64)> {
    if !symmetric {
        return Freq::boxed(h).map(|f| (f, 1)).collect();
    }
    let mut orbits: BTreeMap<Freq, u64> = BTreeMap::new();
    for f in Freq::boxed(h) {
        *orbits.entry(canonical(&f)).or_default() += 1;
    }
    orbits.into_iter().collect()
}

fn cmp_ratio(a: &(BigInt, u64), b: &(BigInt, u64)) -> Ordering {
    let pa = BigInt::from(a.1).pow(3);
    let pb = BigInt::from(b.1).pow(3);
    (&a.0 * pb).cmp(&(&b.0 * pa))
}

struct PrimeScan {
    cases: u64,
    excluded: u64,
    top: Vec<(BigInt, u64, Freq, ExpSumValue)>,
}

/// sup |S_p(b)|/p³ over primes p in [p_lo, p_hi], p ≥ 5, and b in the box off the excluded locus.
pub fn diamond_scan(cubic: Cubic, p_lo: u64, p_hi: u64, box_h: i64) -> Result<DiamondScanReport> {
    let (max_p, max_box) = match cubic.normalized() {
        Cubic::F => (SCAN_F_MAX_P, SCAN_F_MAX_BOX),
        Cubic::F2 => (SCAN_F2_MAX_P, SCAN_F2_MAX_BOX),
        Cubic::Family { .. } => (FAMILY_MAX_P, SCAN_FAMILY_MAX_BOX),
    };
    if p_hi > max_p || box_h > max_box {
        return guard(format!("scan for {cubic:?} needs p <= {max_p} and box <= {max_box}"));
    }
    if box_h < 0 || p_lo > p_hi {
        return invalid("scan needs box >= 0 and p_lo <= p_hi");
    }
    let cubic_eval = cubic.normalized();
    let reps = representatives(box_h, cubic.has_full_symmetry());
    let primes: Vec<u64> = primes_up_to(p_hi).into_iter().filter(|&p| p >= p_lo.max(5)).collect();
    let scans: Vec<Result<PrimeScan>> = primes
        .par_iter()
        .map(|&p| {
            let mut s = PrimeScan { cases: 0, excluded: 0, top: Vec::new() };
            for (b, size) in &reps {
                if cubic.locus(p, b) {
                    s.excluded += size;
                    continue;
                }
                s.cases += size;
                let v = cubic_eval.value(p, b)?;
                s.top.push((v.0.abs(), p, *b, v));
                if s.top.len() > 4 * WITNESSES {
                    sort_top(&mut s.top);
                    s.top.truncate(WITNESSES);
                }
            }
            sort_top(&mut s.top);
            s.top.truncate(WITNESSES);
            Ok(s)
        })
        .collect();
    let (mut cases, mut excluded, mut top) = (0, 0, Vec::new());
    for s in scans {
        let s = s?;
        cases += s.cases;
        excluded += s.excluded;
        top.extend(s.top);
    }
    sort_top(&mut top);
    top.truncate(WITNESSES);
    let (sup_ratio, sup_exact) = match top.first() {
        Some((a, p, _, _)) => {
            let r = BigRational::new(a.clone(), BigInt::from(*p).pow(3));
            (ratio_f64(a, *p), r.to_string())
        }
        None => (0.0, "0".to_string()),
    };
    let witnesses = top
        .into_iter()
        .map(|(a, p, b, v)| DiamondWitness { p, b, value: v.0.to_string(), ratio: ratio_f64(&a, p) })
        .collect();
    Ok(DiamondScanReport {
        cubic,
        primes: (p_lo, p_hi),
        box_h,
        locus: cubic.locus_name().to_string(),
        cases,
        excluded,
        sup_ratio,
        sup_exact,
        witnesses,
    })
}

fn ratio_f64(a: &BigInt, p: u64) -> f64 {
    use num_traits::ToPrimitive;
    a.to_f64().unwrap_or(f64::INFINITY) / (p as f64).powi(3)
}

fn sort_top(v: &mut [(BigInt, u64, Freq, ExpSumValue)]) {
    v.sort_by(|x, y| cmp_ratio(&(y.0.clone(), y.1), &(x.0.clone(), x.1)).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
}
