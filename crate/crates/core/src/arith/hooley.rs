use super::factor::factor_nonzero;

/// Maximal number of divisors of n in a window (e^u, e^{u+1}]; Δ(0) = 0.
pub fn hooley_delta(n: i128) -> u32 {
    if n == 0 {
        return 0;
    }
    let n = n.unsigned_abs();
    assert!(n <= u64::MAX as u128, "hooley_delta argument too large");
    let logs: Vec<f64> = divisors_u64(n as u64).into_iter().map(|d| (d as f64).ln()).collect();
    max_window(&logs)
}

/// Hooley Δ from sorted divisor logarithms: the best window has a divisor at
/// its right endpoint, so slide a left pointer.
pub(crate) fn max_window(logs: &[f64]) -> u32 {
    let mut best = 0usize;
    let mut lo = 0usize;
    for hi in 0..logs.len() {
        while logs[hi] - logs[lo] >= 1.0 {
            lo += 1;
        }
        best = best.max(hi - lo + 1);
    }
    best as u32
}

pub(crate) fn divisors_u64(n: u64) -> Vec<u64> {
    factor_nonzero(n).divisors()
}
