use crate::freq::Freq;

/// F(x, y) = x1 y1² + x2 y2² + x3 y3².
pub fn cubic(x: [i64; 3], y: [i64; 3]) -> i128 {
    (0..3).map(|i| x[i] as i128 * y[i] as i128 * y[i] as i128).sum()
}

/// ∇F(x, y) = ((y_i²), (2 x_i y_i)) as a frequency vector.
pub fn grad_cubic(x: [i64; 3], y: [i64; 3]) -> Freq {
    Freq {
        m: [y[0] * y[0], y[1] * y[1], y[2] * y[2]],
        n: [2 * x[0] * y[0], 2 * x[1] * y[1], 2 * x[2] * y[2]],
    }
}

fn abc(f: &Freq) -> [i128; 3] {
    [0, 1, 2].map(|i| f.m[i] as i128 * f.n[i] as i128 * f.n[i] as i128)
}

/// The dual sextic D(m, n) = Σ m_i² n_i⁴ − 2 Σ_{i<j} m_i m_j n_i² n_j².
pub fn dual_form(f: &Freq) -> i128 {
    let m = f.m.map(|v| v as i128);
    let n2 = f.n.map(|v| v as i128 * v as i128);
    let mut d = 0i128;
    for i in 0..3 {
        d += m[i] * m[i] * n2[i] * n2[i];
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        d -= 2 * m[i] * m[j] * n2[i] * n2[j];
    }
    d
}

/// D through a = m1 n1², b = m2 n2², c = m3 n3², as the expansion of
/// (x−y−z)(x+y−z)(x−y+z)(x+y+z) with x², y², z² = a, b, c.
pub fn dual_via_abc(f: &Freq) -> i128 {
    let [a, b, c] = abc(f);
    a * a + b * b + c * c - 2 * a * b - 2 * b * c - 2 * c * a
}

/// G(m, n) = 6 D(m, n).
pub fn g_form(f: &Freq) -> i128 {
    6 * dual_form(f)
}

/// L_i(m, n) = 2 m_i n_i² − Σ_j m_j n_j².
pub fn l_forms(f: &Freq) -> [i128; 3] {
    let a = abc(f);
    let s: i128 = a.iter().sum();
    [2 * a[0] - s, 2 * a[1] - s, 2 * a[2] - s]
}

/// (∂G/∂m_i, ∂G/∂n_i) = (12 n_i² L_i, 24 m_i n_i L_i).
pub fn grad_g(f: &Freq) -> [i128; 6] {
    let l = l_forms(f);
    let mut g = [0i128; 6];
    for i in 0..3 {
        let m = f.m[i] as i128;
        let n = f.n[i] as i128;
        g[i] = 12 * n * n * l[i];
        g[3 + i] = 24 * m * n * l[i];
    }
    g
}

/// Whether F(x, y) divides D(∇F(x, y)); `None` when F(x, y) = 0.
pub fn poly_div_check(x: [i64; 3], y: [i64; 3]) -> Option<bool> {
    let fv = cubic(x, y);
    if fv == 0 {
        return None;
    }
    Some(dual_form(&grad_cubic(x, y)) % fv == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn examples() {
        let one = Freq::new([1, 1, 1], [1, 1, 1]);
        assert_eq!(dual_form(&one), -3);
        assert_eq!(dual_form(&Freq::new([0; 3], [3, -1, 7])), 0);
        assert_eq!(dual_form(&Freq::new([2, 2, 2], [1, 1, -2])), 0);
        assert_eq!(dual_via_abc(&Freq::new([1, 1, 0], [1, 1, 1])), 0);
        assert_eq!(dual_via_abc(&Freq::new([1, 4, 0], [1, 1, 1])), 9);
        assert_eq!(g_form(&one), -18);
        assert_eq!(l_forms(&one), [-1, -1, -1]);
        assert_eq!(grad_g(&one), [-12, -12, -12, -24, -24, -24]);
        assert_eq!(poly_div_check([1, 2, 3], [1, 1, 1]), Some(true));
        assert_eq!(poly_div_check([1, 0, 0], [0, 1, 1]), None);
        assert_eq!(poly_div_check([1, 0, 0], [1, 1, 1]), Some(true));
    }

    #[test]
    fn abc_expansion_matches_exhaustively() {
        for f in Freq::boxed(5) {
            assert_eq!(dual_form(&f), dual_via_abc(&f), "{f}");
        }
    }

    #[test]
    fn four_factor_product_at_square_points() {
        // With a, b, c perfect squares the factorization is over ℤ.
        for x in -6i128..=6 {
            for y in -6i128..=6 {
                for z in -6i128..=6 {
                    let f = Freq::new([1, 1, 1], [x as i64, y as i64, z as i64]);
                    let prod = (x - y - z) * (x + y - z) * (x - y + z) * (x + y + z);
                    assert_eq!(dual_form(&f), prod);
                }
            }
        }
    }

    fn g_at(v: [i128; 6]) -> i128 {
        let f = Freq::from_array(v.map(|x| x as i64));
        g_form(&f)
    }

    #[test]
    fn gradient_matches_exact_differences() {
        // G has degree ≤ 2 in each m_i and ≤ 4 in each n_i; recover each partial
        // at a point by exact Lagrange differentiation on 5 integer nodes.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let v: [i128; 6] = std::array::from_fn(|_| rng.gen_range(-20..=20));
            let grad = grad_g(&Freq::from_array(v.map(|x| x as i64)));
            for k in 0..6 {
                let at = |h: i128| {
                    let mut w = v;
                    w[k] += h;
                    g_at(w)
                };
                // f'(0) = [f(-2) - 8 f(-1) + 8 f(1) - f(2)] / 12 exactly for quartics.
                let num = at(-2) - 8 * at(-1) + 8 * at(1) - at(2);
                assert_eq!(num % 12, 0);
                assert_eq!(num / 12, grad[k], "k={k} v={v:?}");
            }
        }
    }

    #[test]
    fn cubic_divides_dual_of_gradient() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        for _ in 0..10_000 {
            let x: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-50..=50));
            let y: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-50..=50));
            if let Some(ok) = poly_div_check(x, y) {
                assert!(ok, "x={x:?} y={y:?}");
                checked += 1;
            }
        }
        assert!(checked > 9_000);
    }

    #[test]
    fn gradient_divisibility_consequence() {
        // p | ∇G componentwise implies p | 6 n1 n2 n3 gcd(m1, m2, m3).
        for f in Freq::boxed(3) {
            let g = grad_g(&f);
            let target = 6
                * f.n.iter().map(|&v| v as i128).product::<i128>()
                * crate::arith::gcd(crate::arith::gcd(f.m[0] as i128, f.m[1] as i128) as i128, f.m[2] as i128) as i128;
            for p in [2u64, 3, 5, 7, 11, 13] {
                if g.iter().all(|&c| c % p as i128 == 0) {
                    assert_eq!(target % p as i128, 0, "{f} p={p}");
                }
            }
        }
    }
}
