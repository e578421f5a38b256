use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{factor, rem};
use crate::dualgeom::dual_form;
use crate::error::Result;
use crate::freq::{ExpSumValue, Freq};

use super::closed::closed_form_value;
use super::prime_power::PrimePower;
use super::reduced::ReducedSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Trivial,
    ClosedForm,
    ReducedSum,
    PrimePower,
    SquareFullVanishing,
    Multiplicative,
}

/// Evaluates S_q(m, n) across many calls, caching per-modulus tables.
#[derive(Default)]
pub struct Evaluator {
    reduced: HashMap<u64, ReducedSum>,
    powers: HashMap<(u64, u32), PrimePower>,
    exhaustive: bool,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// An evaluator that never takes the square-full vanishing shortcut, for audits of that shortcut.
    pub fn exhaustive() -> Self {
        Evaluator { exhaustive: true, ..Self::default() }
    }

    /// S_{p^r}(m, n) and the route used to compute it.
    pub fn prime_power_value(&mut self, p: u64, r: u32, f: &Freq) -> Result<(BigInt, Method)> {
        if r == 1 {
            if p >= 5 {
                return Ok((BigInt::from(closed_form_value(p, f)), Method::ClosedForm));
            }
            let rs = match self.reduced.entry(p) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(e) => e.insert(ReducedSum::new(p)?),
            };
            return Ok((rs.eval(f)?.0, Method::ReducedSum));
        }
        // S_{p^r} = 0 unless p | D and p^r | p·D.
        let d = dual_form(f);
        let pr = p.pow(r) as i128;
        if !self.exhaustive && (rem(d, p) != 0 || (d != 0 && (p as i128 * d) % pr != 0)) {
            return Ok((BigInt::from(0), Method::SquareFullVanishing));
        }
        let pp = match self.powers.entry((p, r)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(PrimePower::new(p, r)?),
        };
        Ok((pp.eval(f)?.0, Method::PrimePower))
    }

    pub fn s_q_with_method(&mut self, q: u64, f: &Freq) -> Result<(ExpSumValue, Method)> {
        let fq = factor(q)?;
        if q == 1 {
            return Ok((ExpSumValue::from(1), Method::Trivial));
        }
        let mut v = BigInt::from(1);
        let mut method = Method::Trivial;
        for &(p, r) in fq.factors() {
            let (w, m) = self.prime_power_value(p, r, f)?;
            v *= w;
            method = if fq.factors().len() == 1 { m } else { Method::Multiplicative };
            if v == BigInt::from(0) {
                break;
            }
        }
        Ok((ExpSumValue(v), method))
    }

    pub fn s_q(&mut self, q: u64, f: &Freq) -> Result<ExpSumValue> {
        Ok(self.s_q_with_method(q, f)?.0)
    }
}

/// S_q(m, n) by multiplicativity over the prime powers of q.
pub fn s_q(q: u64, f: &Freq) -> Result<ExpSumValue> {
    Evaluator::new().s_q(q, f)
}
