use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Points per Gauss–Legendre panel.
pub(crate) const PANEL_ORDER: usize = 8;

fn panel_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::new(PANEL_ORDER).expect("order >= 2");
        let mut pairs = gl.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

/// Composite Gauss–Legendre nodes and weights on [a, b] with `panels` equal panels.
pub(crate) fn composite(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * PANEL_ORDER);
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        for &(x, w) in panel_rule() {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

pub(crate) fn integrate(a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let mut p = 0.0;
        for &(x, w) in panel_rule() {
            p += w * f(mid + 0.5 * h * x);
        }
        s += 0.5 * h * p;
    }
    s
}

/// Absolute/relative stopping pair for panel doubling.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { atol: 1e-6, rtol: 1e-4 }
    }
}

impl Tolerance {
    pub fn accepts(&self, prev: f64, cur: f64) -> bool {
        (cur - prev).abs() <= self.atol.max(self.rtol * cur.abs())
    }
}

/// Runs `eval(level)` for increasing levels until two successive values agree.
/// `eval` returns (value, nodes used).
pub(crate) fn refine(tol: Tolerance, max_level: u32, mut eval: impl FnMut(u32) -> (f64, u64)) -> Result<(f64, u64)> {
    let (mut prev, mut nodes) = eval(0);
    let mut change = f64::INFINITY;
    for level in 1..=max_level {
        let (cur, n) = eval(level);
        nodes += n;
        if tol.accepts(prev, cur) {
            return Ok((cur, nodes));
        }
        change = (cur - prev).abs() / cur.abs().max(f64::MIN_POSITIVE);
        prev = cur;
    }
    Err(Error::Quadrature { nodes, change })
}

/// Two-axis panel refinement. `eval(py, px)` returns (value, nodes). Each round doubles the
/// panels on every axis whose doubling still moves the value; on acceptance the two one-axis
/// refinements are combined additively.
pub(crate) fn refine_axes(
    tol: Tolerance,
    max_nodes: u64,
    cost: impl Fn(usize, usize) -> u64,
    mut eval: impl FnMut(usize, usize) -> f64,
) -> Result<(f64, u64)> {
    let (mut py, mut px) = (1usize, 1usize);
    let mut cur = eval(py, px);
    let mut nodes = cost(py, px);
    loop {
        let vy = eval(2 * py, px);
        let vx = eval(py, 2 * px);
        nodes += cost(2 * py, px) + cost(py, 2 * px);
        let (ok_y, ok_x) = (tol.accepts(cur, vy), tol.accepts(cur, vx));
        if ok_y && ok_x {
            return Ok((vy + vx - cur, nodes));
        }
        let change = (vy - cur).abs().max((vx - cur).abs()) / cur.abs().max(f64::MIN_POSITIVE);
        if !ok_y {
            py *= 2;
        }
        if !ok_x {
            px *= 2;
        }
        let next = cost(py, px) + cost(2 * py, px) + cost(py, 2 * px);
        if nodes + next > max_nodes {
            return Err(Error::Quadrature { nodes, change });
        }
        cur = eval(py, px);
        nodes += cost(py, px);
    }
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_and_exponentials() {
        assert!((integrate(0.0, 2.0, 1, |x| x.powi(15)) - 2f64.powi(16) / 16.0).abs() < 1e-9);
        assert!((integrate(0.0, 1.0, 4, f64::exp) - (1f64.exp() - 1.0)).abs() < 1e-14);
        let s: f64 = composite(-1.0, 3.0, 3).iter().map(|&(_, w)| w).sum();
        assert!((s - 4.0).abs() < 1e-13);
    }

    #[test]
    fn refine_reports_budget() {
        let r = refine(Tolerance::default(), 3, |l| (l as f64, 10));
        assert!(matches!(r, Err(Error::Quadrature { nodes: 40, .. })));
        assert_eq!(refine(Tolerance::default(), 3, |_| (2.0, 5)).unwrap(), (2.0, 10));
    }

    #[test]
    fn axis_refinement_stops_on_the_converged_axis() {
        // value = 1 + 2^-py + 2^-(10 px): only the y axis needs work
        let (v, _) = refine_axes(Tolerance { atol: 1e-6, rtol: 0.0 }, u64::MAX, |_, _| 1, |py, px| {
            1.0 + 0.5f64.powi(py as i32) + 0.5f64.powi(10 * px as i32)
        })
        .unwrap();
        assert!((v - 1.0).abs() < 1e-5);
        assert!(refine_axes(Tolerance::default(), 100, |_, _| 10, |py, _| py as f64).is_err());
    }

    #[test]
    fn kahan_sums_small_terms() {
        let mut k = Kahan::default();
        k.add(1.0);
        for _ in 0..1_000_000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1e-10)).abs() < 1e-15);
    }
}
