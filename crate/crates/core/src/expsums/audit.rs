use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, gcd, kappa, omega, rem, square_gcd, v_p_or_inf};
use crate::dualgeom::{dual_form, g_form, grad_g};
use crate::error::{invalid, Error, Result};
use crate::freq::Freq;

use super::convolution::{convolution_check, s2_prime_power};
use super::eval::Evaluator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    NVanishing,
    CorBasic,
    SquarefreeBound,
    SquareFull,
    Grad1,
    Beach,
    L1,
    L2,
    L3,
    L4,
    L5,
    Tricky22,
    Convolution,
}

impl LemmaId {
    pub const ALL: [LemmaId; 13] = [
        LemmaId::NVanishing,
        LemmaId::CorBasic,
        LemmaId::SquarefreeBound,
        LemmaId::SquareFull,
        LemmaId::Grad1,
        LemmaId::Beach,
        LemmaId::L1,
        LemmaId::L2,
        LemmaId::L3,
        LemmaId::L4,
        LemmaId::L5,
        LemmaId::Tricky22,
        LemmaId::Convolution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::NVanishing => "n-vanishing",
            LemmaId::CorBasic => "basic-bound",
            LemmaId::SquarefreeBound => "squarefree-bound",
            LemmaId::SquareFull => "square-full",
            LemmaId::Grad1 => "grad1",
            LemmaId::Beach => "beach",
            LemmaId::L1 => "l1",
            LemmaId::L2 => "l2",
            LemmaId::L3 => "l3",
            LemmaId::L4 => "l4",
            LemmaId::L5 => "l5",
            LemmaId::Tricky22 => "tricky22",
            LemmaId::Convolution => "convolution",
        }
    }

    /// Exact statements count violations; ≪-bounds report a supremum ratio.
    pub fn is_exact(self) -> bool {
        !matches!(self, LemmaId::CorBasic | LemmaId::SquarefreeBound | LemmaId::L1 | LemmaId::Tricky22)
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown lemma '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub q: u64,
    pub f: Freq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub lemma: LemmaId,
    pub box_h: i64,
    pub q_max: u64,
    pub exact: bool,
    pub cases: u64,
    pub violations: u64,
    pub sup_ratio: Option<f64>,
    pub sup_witness: Option<Witness>,
    pub first_violation: Option<Witness>,
}

#[derive(Default, Clone)]
struct Acc {
    cases: u64,
    violations: u64,
    sup: Option<(f64, Witness)>,
    first: Option<Witness>,
}

impl Acc {
    fn check(&mut self, ok: bool, q: u64, f: &Freq) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            let w = Witness { q, f: *f };
            if self.first.map_or(true, |v| key(&w) < key(&v)) {
                self.first = Some(w);
            }
        }
    }

    fn ratio(&mut self, value: f64, q: u64, f: &Freq) {
        self.cases += 1;
        let w = Witness { q, f: *f };
        let better = match self.sup {
            None => true,
            Some((s, ref sw)) => value > s || (value == s && key(&w) < key(sw)),
        };
        if better {
            self.sup = Some((value, w));
        }
    }

    fn merge(mut self, o: Acc) -> Acc {
        self.cases += o.cases;
        self.violations += o.violations;
        if let Some(w) = o.first {
            if self.first.map_or(true, |v| key(&w) < key(&v)) {
                self.first = Some(w);
            }
        }
        if let Some((v, w)) = o.sup {
            let better = match self.sup {
                None => true,
                Some((s, ref sw)) => v > s || (v == s && key(&w) < key(sw)),
            };
            if better {
                self.sup = Some((v, w));
            }
        }
        self
    }
}

fn key(w: &Witness) -> (u64, Freq) {
    (w.q, w.f)
}

fn to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// {q, m}^{1/2}: the square root of the largest square dividing gcd(q, m).
fn sq_root_gcd(q: u64, m: i64) -> u64 {
    let s = square_gcd(q as i128, m as i128).unwrap_or(1);
    let r = (s as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&x| (x as u128) * (x as u128) == s).unwrap_or(r)
}

fn p_divides_grad(f: &Freq, p: u64) -> bool {
    grad_g(f).iter().all(|&g| rem(g, p) == 0)
}

fn prime_powers_up_to(q_max: u64) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for p in crate::arith::primes_up_to(q_max) {
        let mut pr = p;
        let mut r = 1;
        while pr <= q_max {
            out.push((p, r, pr));
            r += 1;
            pr *= p;
        }
    }
    out
}

fn audit_one(lemma: LemmaId, ev: &mut Evaluator, q_max: u64, f: &Freq, acc: &mut Acc) -> Result<()> {
    match lemma {
        LemmaId::NVanishing => {
            for q in 1..=q_max {
                if !ev.s_q(q, f)?.is_zero() {
                    let ok = (0..3).all(|i| f.n[i] % sq_root_gcd(q, f.m[i]) as i64 == 0);
                    acc.check(ok, q, f);
                } else {
                    acc.cases += 1;
                }
            }
        }
        LemmaId::CorBasic => {
            for q in 1..=q_max {
                let s = ev.s_q(q, f)?.0;
                let roots: Vec<u64> = (0..3).map(|i| sq_root_gcd(q, f.m[i])).collect();
                let divides = (0..3).all(|i| f.n[i] % roots[i] as i64 == 0);
                if !divides {
                    acc.check(s.is_zero(), q, f);
                    continue;
                }
                let bound = 8f64.powi(omega(q) as i32) * (q as f64).powi(4) * roots.iter().map(|&r| r as f64).product::<f64>();
                acc.ratio(to_f64(&s.abs()) / bound, q, f);
            }
        }
        LemmaId::SquarefreeBound => {
            let d = dual_form(f);
            for q in (1..=q_max).filter(|&q| factor(q).map(|fq| fq.is_squarefree()).unwrap_or(false)) {
                let s = ev.s_q(q, f)?.0;
                let g = gcd(q as i128, d) as f64;
                let bound = 4f64.powi(omega(q) as i32) * (q as f64).powi(3) * g;
                acc.ratio(to_f64(&s.abs()) / bound, q, f);
            }
        }
        LemmaId::SquareFull => {
            let d = dual_form(f);
            for q in 2..=q_max {
                let fq = factor(q)?;
                if !fq.is_square_full() {
                    continue;
                }
                let k = kappa(q) as i128;
                let allowed = d % k == 0 && (k * d) % q as i128 == 0;
                let s = ev.s_q(q, f)?;
                acc.check(allowed || s.is_zero(), q, f);
            }
        }
        LemmaId::Grad1 => {
            let d = dual_form(f);
            for (p, r, pr) in prime_powers_up_to(q_max) {
                if rem(d, p) != 0 || p_divides_grad(f, p) {
                    continue;
                }
                if r == 1 {
                    acc.check(f.n.iter().all(|&v| rem(v as i128, p) != 0), p, f);
                } else if !ev.prime_power_value(p, r, f)?.0.is_zero() {
                    acc.check(f.m.iter().all(|&v| rem(v as i128, p) != 0), pr, f);
                }
            }
        }
        LemmaId::Beach => {
            for (p, r, pr) in prime_powers_up_to(q_max) {
                if p_divides_grad(f, p) {
                    continue;
                }
                let s = ev.prime_power_value(p, r, f)?.0;
                acc.check(s.abs() <= BigInt::from(p).pow(4 * r), pr, f);
            }
        }
        LemmaId::L1 => {
            for q in 1..=q_max {
                let s2 = super::convolution::s2_with(ev, q, f)?.0;
                let root: f64 = (0..3).map(|i| (square_gcd(q as i128, f.m[i] as i128).unwrap_or(1) as f64).sqrt()).product();
                acc.ratio(to_f64(&s2.abs()) / ((q as f64).powi(4) * root), q, f);
            }
        }
        LemmaId::L2 => {
            let g = g_form(f);
            for (p, r, pr) in prime_powers_up_to(q_max) {
                if rem(g, p) != 0 {
                    acc.check(s2_prime_power(ev, p, r, f)?.is_zero(), pr, f);
                }
            }
        }
        LemmaId::L3 => {
            for q in 1..=q_max {
                let fq = factor(q)?;
                if fq.factors().iter().any(|&(p, _)| p_divides_grad(f, p)) {
                    continue;
                }
                let s2 = super::convolution::s2_with(ev, q, f)?.0;
                acc.check(s2.abs() <= BigInt::from(q).pow(4), q, f);
            }
        }
        LemmaId::L4 => {
            let g = g_form(f);
            if g == 0 {
                return Ok(());
            }
            for (p, r, pr) in prime_powers_up_to(q_max) {
                if r >= 2 + v_p_or_inf(g, p) {
                    acc.check(s2_prime_power(ev, p, r, f)?.is_zero(), pr, f);
                }
            }
        }
        LemmaId::L5 => {
            let g = g_form(f);
            if g == 0 {
                return Ok(());
            }
            for (p, r, pr) in prime_powers_up_to(q_max) {
                if r == 1 + v_p_or_inf(g, p) {
                    let s2 = s2_prime_power(ev, p, r, f)?;
                    acc.check(s2.abs() <= BigInt::from(p).pow(4 * r - 1), pr, f);
                }
            }
        }
        LemmaId::Tricky22 => {
            if f.m[0] != 0 || f.m[1] != 0 {
                return Ok(());
            }
            for q in 2..=q_max {
                if !factor(q)?.is_square_full() {
                    continue;
                }
                let s = ev.s_q(q, f)?.0;
                let bound = (q as f64).powi(4) * gcd(q as i128, f.m[2] as i128) as f64 * gcd(q as i128, f.n[2] as i128) as f64;
                acc.ratio(to_f64(&s.abs()) / bound, q, f);
            }
        }
        LemmaId::Convolution => {
            for q in 1..=q_max {
                let (lhs, rhs) = convolution_check(ev, q, f)?;
                acc.check(lhs == rhs, q, f);
            }
        }
    }
    Ok(())
}

/// Checks one lemma over every f with |m|, |n| ≤ box_h and every modulus up to q_max.
pub fn lemma_audit(lemma: LemmaId, box_h: i64, q_max: u64) -> Result<AuditReport> {
    if !(0..=6).contains(&box_h) || !(1..=2000).contains(&q_max) {
        return invalid("lemma_audit needs 0 <= box <= 6 and 1 <= q_max <= 2000");
    }
    let freqs: Vec<Freq> = Freq::boxed(box_h).collect();
    audit_frequencies(lemma, &freqs, box_h, q_max)
}

/// Same as [`lemma_audit`] over an explicit frequency list.
pub fn audit_frequencies(lemma: LemmaId, freqs: &[Freq], box_h: i64, q_max: u64) -> Result<AuditReport> {
    let acc = freqs
        .par_chunks(256)
        .map_init(Evaluator::exhaustive, |ev, chunk| -> Result<Acc> {
            let mut acc = Acc::default();
            for f in chunk {
                audit_one(lemma, ev, q_max, f, &mut acc)?;
            }
            Ok(acc)
        })
        .try_reduce(Acc::default, |a, b| Ok(a.merge(b)))?;
    Ok(AuditReport {
        lemma,
        box_h,
        q_max,
        exact: lemma.is_exact(),
        cases: acc.cases,
        violations: acc.violations,
        sup_ratio: acc.sup.map(|s| s.0),
        sup_witness: acc.sup.map(|s| s.1),
        first_violation: acc.first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for l in LemmaId::ALL {
            assert_eq!(l.name().parse::<LemmaId>().unwrap(), l);
        }
        assert!("nope".parse::<LemmaId>().is_err());
    }

    #[test]
    fn exact_lemmas_hold_on_small_box() {
        for l in LemmaId::ALL.into_iter().filter(|l| l.is_exact()) {
            let r = lemma_audit(l, 1, 40).unwrap();
            assert_eq!(r.violations, 0, "{l}: {:?}", r.first_violation);
            assert!(r.cases > 0, "{l}");
        }
    }

    #[test]
    fn ratio_lemmas_report_a_finite_sup() {
        for l in [LemmaId::CorBasic, LemmaId::SquarefreeBound, LemmaId::L1] {
            let r = lemma_audit(l, 1, 30).unwrap();
            let s = r.sup_ratio.unwrap();
            assert!(s.is_finite() && s > 0.0, "{l}");
            assert_eq!(r.violations, 0);
        }
        let r = lemma_audit(LemmaId::Tricky22, 2, 64).unwrap();
        assert!(r.sup_ratio.unwrap().is_finite());
    }

    #[test]
    fn deterministic_across_runs() {
        let a = lemma_audit(LemmaId::CorBasic, 1, 20).unwrap();
        let b = lemma_audit(LemmaId::CorBasic, 1, 20).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn detects_a_false_statement() {
        let mut acc = Acc::default();
        acc.check(false, 9, &Freq::ZERO);
        assert_eq!(acc.violations, 1);
        assert_eq!(acc.first.unwrap().q, 9);
    }
}
