use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, gcd};
use crate::error::{invalid, Error, Result};

/// Which lattice a basis spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parent {
    Lambda([i64; 3]),
    LambdaPerp([i64; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub rows: [[i64; 6]; 3],
    pub parent: Parent,
}

pub fn is_primitive(t: [i64; 3]) -> bool {
    gcd(gcd(t[0] as i128, t[1] as i128) as i128, t[2] as i128) == 1
}

pub(crate) fn require_primitive(t: [i64; 3]) -> Result<()> {
    if !is_primitive(t) {
        return invalid(format!("t = {t:?} is not primitive"));
    }
    Ok(())
}

fn dot3(a: [i64; 3], b: [i64; 3]) -> i128 {
    (0..3).map(|i| a[i] as i128 * b[i] as i128).sum()
}

/// A basis of {x ∈ ℤ³ : a·x = 0} for a ≠ 0.
pub fn kernel_basis(a: [i64; 3]) -> [[i64; 3]; 2] {
    let [a1, a2, a3] = a.map(|v| v as i128);
    assert!(a != [0; 3], "kernel_basis of the zero vector");
    if a1 == 0 && a2 == 0 {
        return [[1, 0, 0], [0, 1, 0]];
    }
    let (g12, u, v) = ext_gcd(a1, a2);
    let g = gcd(g12, a3) as i128;
    let c = a3 / g;
    let v1 = [a2 / g12, -a1 / g12, 0];
    let v2 = [-c * u, -c * v, g12 / g];
    [v1.map(|x| x as i64), v2.map(|x| x as i64)]
}

/// Lagrange–Gauss reduction of a rank-2 basis.
pub fn gauss_reduce(mut b: [[i64; 3]; 2]) -> [[i64; 3]; 2] {
    let norm = |v: [i64; 3]| dot3(v, v);
    if norm(b[0]) > norm(b[1]) {
        b.swap(0, 1);
    }
    loop {
        let n0 = norm(b[0]);
        let mu = dot3(b[0], b[1]) as f64 / n0 as f64;
        let k = mu.round() as i64;
        let w = [0, 1, 2].map(|i| b[1][i] - k * b[0][i]);
        if norm(w) >= n0 {
            b[1] = w;
            return b;
        }
        b[1] = b[0];
        b[0] = w;
    }
}

/// Calls `f` for every x with a·x = 0 and |x|∞ ≤ bound.
pub fn for_each_kernel_point_in_box(a: [i64; 3], bound: i64, mut f: impl FnMut([i64; 3])) {
    let [w1, w2] = gauss_reduce(kernel_basis(a));
    let g11 = dot3(w1, w1) as f64;
    let g12 = dot3(w1, w2) as f64;
    let g22 = dot3(w2, w2) as f64;
    let det = g11 * g22 - g12 * g12;
    let l1 = |v: [i64; 3]| v.iter().map(|x| x.unsigned_abs() as f64).sum::<f64>();
    // a-coefficient of x = a w1 + b w2 is (g22 x·w1 − g12 x·w2)/det.
    let amax = ((bound as f64) * (g22 * l1(w1) + g12.abs() * l1(w2)) / det).floor() as i64 + 1;
    for ca in -amax..=amax {
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        let mut empty = false;
        for c in 0..3 {
            let base = ca as i128 * w1[c] as i128;
            let d = w2[c] as i128;
            let b = bound as i128;
            if d == 0 {
                if base.abs() > b {
                    empty = true;
                    break;
                }
                continue;
            }
            let (l, h) = if d > 0 {
                (ceil_div(-b - base, d), floor_div(b - base, d))
            } else {
                (ceil_div(b - base, d), floor_div(-b - base, d))
            };
            lo = lo.max(l as i64);
            hi = hi.min(h as i64);
        }
        if empty || lo > hi {
            continue;
        }
        for cb in lo..=hi {
            f([0, 1, 2].map(|i| ca * w1[i] + cb * w2[i]));
        }
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

pub fn lambda_basis(t: [i64; 3]) -> Result<LatticeBasis> {
    require_primitive(t)?;
    let t2 = t.map(|v| v * v);
    let [v1, v2] = kernel_basis(t2);
    let rows = [
        [v1[0], v1[1], v1[2], 0, 0, 0],
        [v2[0], v2[1], v2[2], 0, 0, 0],
        [0, 0, 0, t[0], t[1], t[2]],
    ];
    Ok(LatticeBasis { rows: hnf_rows(rows), parent: Parent::Lambda(t) })
}

pub fn lambda_perp_basis(t: [i64; 3]) -> Result<LatticeBasis> {
    require_primitive(t)?;
    let [w1, w2] = kernel_basis(t);
    let rows = [
        [t[0] * t[0], t[1] * t[1], t[2] * t[2], 0, 0, 0],
        [0, 0, 0, w1[0], w1[1], w1[2]],
        [0, 0, 0, w2[0], w2[1], w2[2]],
    ];
    Ok(LatticeBasis { rows: hnf_rows(rows), parent: Parent::LambdaPerp(t) })
}

impl LatticeBasis {
    /// Whether v satisfies the defining conditions of the parent lattice.
    pub fn contains_condition(&self, v: [i64; 6]) -> bool {
        let x = [v[0], v[1], v[2]];
        let y = [v[3], v[4], v[5]];
        match self.parent {
            Parent::Lambda(t) => dot3(x, t.map(|s| s * s)) == 0 && on_line(y, t),
            Parent::LambdaPerp(t) => on_line_scaled(x, t.map(|s| s * s)) && dot3(y, t) == 0,
        }
    }

    pub fn combination(&self, c: [i64; 3]) -> [i64; 6] {
        let mut v = [0i64; 6];
        for (r, &k) in self.rows.iter().zip(&c) {
            for i in 0..6 {
                v[i] += k * r[i];
            }
        }
        v
    }

    /// gcd of the 3×3 minors; 1 exactly when the rows span a saturated lattice.
    pub fn minor_gcd(&self) -> u128 {
        let mut g = 0u128;
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    let m: [[i128; 3]; 3] = std::array::from_fn(|i| [a, b, c].map(|j| self.rows[i][j] as i128));
                    let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
                    g = gcd(g as i128, d);
                }
            }
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.minor_gcd() == 1
    }

    /// Successive minima λ₁ ≤ λ₂ ≤ λ₃ in the Euclidean norm.
    pub fn successive_minima(&self) -> [f64; 3] {
        successive_minima(self.rows)
    }
}

fn on_line(y: [i64; 3], t: [i64; 3]) -> bool {
    // y ∈ tℤ for primitive t.
    let cross = [
        y[1] as i128 * t[2] as i128 - y[2] as i128 * t[1] as i128,
        y[2] as i128 * t[0] as i128 - y[0] as i128 * t[2] as i128,
        y[0] as i128 * t[1] as i128 - y[1] as i128 * t[0] as i128,
    ];
    cross == [0, 0, 0]
}

fn on_line_scaled(x: [i64; 3], d: [i64; 3]) -> bool {
    // x ∈ dℤ where gcd(d) = 1.
    on_line(x, d)
}

/// Row-style Hermite normal form of a full-rank 3×6 integer matrix.
pub fn hnf_rows(rows: [[i64; 6]; 3]) -> [[i64; 6]; 3] {
    let mut m: Vec<[i128; 6]> = rows.iter().map(|r| r.map(|v| v as i128)).collect();
    let mut pivot_row = 0;
    for col in 0..6 {
        if pivot_row == 3 {
            break;
        }
        loop {
            let nz: Vec<usize> = (pivot_row..3).filter(|&i| m[i][col] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            m.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..3 {
                let q = m[i][col].div_euclid(m[pivot_row][col]);
                if q != 0 {
                    for j in 0..6 {
                        m[i][j] -= q * m[pivot_row][j];
                    }
                }
                if m[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            for j in 0..6 {
                m[pivot_row][j] = -m[pivot_row][j];
            }
        }
        for i in 0..pivot_row {
            let q = m[i][col].div_euclid(m[pivot_row][col]);
            for j in 0..6 {
                m[i][j] -= q * m[pivot_row][j];
            }
        }
        pivot_row += 1;
    }
    std::array::from_fn(|i| m[i].map(|v| v as i64))
}

fn dot6(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL reduction (δ = 3/4) of three rows in ℤ⁶.
pub fn lll(rows: [[i64; 6]; 3]) -> [[i64; 6]; 3] {
    let mut b: Vec<[i64; 6]> = rows.to_vec();
    let k_max = b.len();
    let gso = |b: &Vec<[i64; 6]>| {
        let bf: Vec<[f64; 6]> = b.iter().map(|r| r.map(|v| v as f64)).collect();
        let mut bs: Vec<[f64; 6]> = Vec::new();
        let mut mu = vec![vec![0.0; k_max]; k_max];
        for i in 0..k_max {
            let mut v = bf[i];
            for j in 0..i {
                mu[i][j] = dot6(&bf[i], &bs[j]) / dot6(&bs[j], &bs[j]);
                for c in 0..6 {
                    v[c] -= mu[i][j] * bs[j][c];
                }
            }
            bs.push(v);
        }
        (bs, mu)
    };
    let mut k = 1;
    while k < k_max {
        for j in (0..k).rev() {
            let (_, mu) = gso(&b);
            let r = mu[k][j].round() as i64;
            if r != 0 {
                for c in 0..6 {
                    b[k][c] -= r * b[j][c];
                }
            }
        }
        let (bs, mu) = gso(&b);
        let lhs = dot6(&bs[k], &bs[k]);
        let rhs = (0.75 - mu[k][k - 1] * mu[k][k - 1]) * dot6(&bs[k - 1], &bs[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    [b[0], b[1], b[2]]
}

fn rank_of(vs: &[[i64; 6]]) -> usize {
    let mut m: Vec<[i128; 6]> = vs.iter().map(|r| r.map(|v| v as i128)).collect();
    let mut rank = 0;
    for col in 0..6 {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][col] != 0 {
                let (a, b) = (m[rank][col], m[i][col]);
                for j in 0..6 {
                    m[i][j] = m[i][j] * a - m[rank][j] * b;
                }
                let g = m[i].iter().fold(0u128, |g, &v| gcd(g as i128, v));
                if g > 1 {
                    for j in 0..6 {
                        m[i][j] /= g as i128;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Successive minima by enumeration inside the ball of radius ‖longest LLL row‖.
pub fn successive_minima(rows: [[i64; 6]; 3]) -> [f64; 3] {
    let b = lll(rows);
    let norm2 = |v: &[i64; 6]| v.iter().map(|&x| (x as i128) * (x as i128)).sum::<i128>();
    let r2 = b.iter().map(norm2).max().unwrap();
    // Coefficient bounds from the dual basis: |c_i| ≤ R ‖d_i‖.
    let bf: [[f64; 6]; 3] = b.map(|r| r.map(|v| v as f64));
    let g: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| dot6(&bf[i], &bf[j])));
    let gi = invert3(g);
    let bounds: [i64; 3] = std::array::from_fn(|i| ((r2 as f64).sqrt() * gi[i][i].sqrt()).floor() as i64 + 1);
    let mut found: Vec<(i128, [i64; 6])> = Vec::new();
    for c0 in -bounds[0]..=bounds[0] {
        for c1 in -bounds[1]..=bounds[1] {
            for c2 in -bounds[2]..=bounds[2] {
                if (c0, c1, c2) == (0, 0, 0) {
                    continue;
                }
                let v: [i64; 6] = std::array::from_fn(|k| c0 * b[0][k] + c1 * b[1][k] + c2 * b[2][k]);
                let n2 = norm2(&v);
                if n2 <= r2 {
                    found.push((n2, v));
                }
            }
        }
    }
    found.sort();
    let mut chosen: Vec<[i64; 6]> = Vec::new();
    let mut minima = [0.0; 3];
    for (n2, v) in found {
        let mut trial = chosen.clone();
        trial.push(v);
        if rank_of(&trial) > chosen.len() {
            minima[chosen.len()] = (n2 as f64).sqrt();
            chosen = trial;
            if chosen.len() == 3 {
                break;
            }
        }
    }
    minima
}

fn invert3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        s * (m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]])
    };
    std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) / det))
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
