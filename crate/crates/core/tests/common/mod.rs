//! Instance generators and brute-force oracles shared by the integration
//! tests. Everything here is deliberately naive and independent of the
//! library's numerics.
#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randomd::apps::SparseGameMatrix;

/// `n × n` matrix with `s` distinct uniformly placed nonzeros per row,
/// values uniform in `[−1, 1]`.
pub fn random_sparse_game(n: usize, s: usize, seed: u64) -> SparseGameMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::with_capacity(n * s);
    for i in 0..n {
        for j in sample(&mut rng, n, s) {
            t.push((i, j, rng.random_range(-1.0..=1.0)));
        }
    }
    SparseGameMatrix::from_triplets(n, n, t).unwrap()
}

pub fn random_dense(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect()
}

/// Sparse row-stochastic `n × n` matrix: a self-loop, a ring edge to
/// `i + 1` and `extra` random links per row with random positive weights.
/// The ring makes it irreducible and the self-loops aperiodic.
pub fn random_stochastic(n: usize, extra: usize, seed: u64) -> SparseGameMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    for i in 0..n {
        let mut cols = vec![i, (i + 1) % n];
        for j in sample(&mut rng, n, extra) {
            if !cols.contains(&j) {
                cols.push(j);
            }
        }
        let w: Vec<f64> = cols.iter().map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = w.iter().sum();
        for (j, v) in cols.into_iter().zip(w) {
            t.push((i, j, v / total));
        }
    }
    SparseGameMatrix::from_triplets(n, n, t).unwrap()
}

/// Fixed point of `x ← Pᵀx` from the uniform start, iterated until the
/// ∞-norm change drops below `tol`.
pub fn power_iteration(p: &[Vec<f64>], tol: f64) -> Vec<f64> {
    let n = p.len();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..1_000_000 {
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[j] += p[i][j] * x[i];
            }
        }
        let delta = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if delta < tol {
            return x;
        }
    }
    panic!("power iteration did not converge");
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_linear(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[piv][c].abs() < 1e-12 {
            return None;
        }
        m.swap(c, piv);
        b.swap(c, piv);
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for (r, row) in rest.iter_mut().enumerate() {
            let f = row[c] / pivot[c];
            row.iter_mut()
                .zip(pivot)
                .skip(c)
                .for_each(|(a, p)| *a -= f * p);
            b[c + 1 + r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / m[r][r];
    }
    Some(x)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Equilibrium of `min_x max_ω ⟨ω, A x⟩` by support enumeration: for every
/// pair of equal-size supports solve both indifference systems and keep the
/// first pair that is a mutual best response. Returns `(value, x, ω)`.
pub fn game_oracle(a: &[Vec<f64>]) -> (f64, Vec<f64>, Vec<f64>) {
    let (rows, cols) = (a.len(), a[0].len());
    let tol = 1e-9;
    for k in 1..=rows.min(cols) {
        for t in subsets(rows, k) {
            for s in subsets(cols, k) {
                // Column player: Σ_{j∈S} a_ij x_j − v = 0 for i ∈ T, Σ x_j = 1.
                let mut m = Vec::new();
                let mut b = Vec::new();
                for &i in &t {
                    let mut row: Vec<f64> = s.iter().map(|&j| a[i][j]).collect();
                    row.push(-1.0);
                    m.push(row);
                    b.push(0.0);
                }
                let mut ones = vec![1.0; k];
                ones.push(0.0);
                m.push(ones.clone());
                b.push(1.0);
                let Some(xs) = solve_linear(m, b) else {
                    continue;
                };
                // Row player: Σ_{i∈T} ω_i a_ij − v = 0 for j ∈ S, Σ ω_i = 1.
                let mut m = Vec::new();
                let mut b = Vec::new();
                for &j in &s {
                    let mut row: Vec<f64> = t.iter().map(|&i| a[i][j]).collect();
                    row.push(-1.0);
                    m.push(row);
                    b.push(0.0);
                }
                m.push(ones);
                b.push(1.0);
                let Some(ws) = solve_linear(m, b) else {
                    continue;
                };
                let v = xs[k];
                if xs[..k].iter().chain(&ws[..k]).any(|p| *p < -tol) {
                    continue;
                }
                let mut x = vec![0.0; cols];
                s.iter().zip(&xs).for_each(|(&j, p)| x[j] = p.max(0.0));
                let mut w = vec![0.0; rows];
                t.iter().zip(&ws).for_each(|(&i, p)| w[i] = p.max(0.0));
                let ax_max = (0..rows)
                    .map(|i| (0..cols).map(|j| a[i][j] * x[j]).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max);
                let wa_min = (0..cols)
                    .map(|j| (0..rows).map(|i| w[i] * a[i][j]).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                if ax_max <= v + tol && wa_min >= v - tol {
                    return (v, x, w);
                }
            }
        }
    }
    panic!("no equilibrium found (degenerate game?)");
}
