//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use quasiproj::{build_cluster, embed, ClusterSpec, Embedding, GCluster, Vec2};

pub fn one_shell(n: u32) -> (GCluster, Embedding) {
    let c = build_cluster(&ClusterSpec::single(n, 1.0, 0.0)).unwrap();
    let e = embed(&c).unwrap();
    (c, e)
}

/// `max_i |y_i − α w1_i − β w2_i|`.
fn sup_residual(w1: &[f64], w2: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    y.iter()
        .zip(w1)
        .zip(w2)
        .map(|((yi, u), v)| (yi - a * u - b * v).abs())
        .fold(0.0, f64::max)
}

/// Minimum over `(α, β)` of the sup-norm residual, by a dense grid followed by
/// repeated zooming around the best node.
pub fn min_sup_residual(w1: &[f64], w2: &[f64], y: &[f64]) -> f64 {
    let k2: f64 = w1.iter().map(|u| u * u).sum();
    let mut ca = y.iter().zip(w1).map(|(p, q)| p * q).sum::<f64>() / k2;
    let mut cb = y.iter().zip(w2).map(|(p, q)| p * q).sum::<f64>() / k2;
    let ymax = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut half = 2.0 * (ymax + 1.0) / k2.sqrt();
    let steps = 16;
    let mut best = sup_residual(w1, w2, y, ca, cb);
    for _ in 0..50 {
        let h = 2.0 * half / steps as f64;
        let (mut ba, mut bb) = (ca, cb);
        for i in 0..=steps {
            for j in 0..=steps {
                let a = ca - half + i as f64 * h;
                let b = cb - half + j as f64 * h;
                let f = sup_residual(w1, w2, y, a, b);
                if f < best {
                    best = f;
                    ba = a;
                    bb = b;
                }
            }
        }
        ca = ba;
        cb = bb;
        half = 3.0 * h;
    }
    best
}

/// Strip membership decided by [`min_sup_residual`].
pub fn oracle_in_strip(e: &Embedding, t: &[f64], tol: f64, x: &[i64]) -> bool {
    let y: Vec<f64> = x.iter().zip(t).map(|(&a, &b)| a as f64 - b).collect();
    min_sup_residual(e.w1(), e.w2(), &y) <= 0.5 + tol
}

/// Distance from `y` to `span(w1, w2)` through the 2×2 normal equations,
/// without assuming `w1 ⊥ w2` or equal norms.
pub fn plane_distance(w1: &[f64], w2: &[f64], y: &[f64]) -> f64 {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let (g11, g12, g22) = (d(w1, w1), d(w1, w2), d(w2, w2));
    let (r1, r2) = (d(w1, y), d(w2, y));
    let det = g11 * g22 - g12 * g12;
    let a = (r1 * g22 - r2 * g12) / det;
    let b = (g11 * r2 - g12 * r1) / det;
    y.iter()
        .zip(w1)
        .zip(w2)
        .map(|((yi, u), v)| (yi - a * u - b * v).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Every point of `{lo..=hi}^k`.
pub fn lattice_box(k: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Sorted, `eps`-deduplicated smallest `count` values.
pub fn smallest_distinct(mut values: Vec<f64>, count: usize, eps: f64) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if out.last().is_none_or(|&l| v - l > eps) {
            out.push(v);
        }
        if out.len() == count {
            break;
        }
    }
    out
}

pub fn brute_min_pair(points: &[Vec2]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(points[i].dist(points[j]));
        }
    }
    best
}

/// `|Σ_{a=0}^{n-1} e^{i u a}|² = sin²(n u / 2) / sin²(u / 2)`.
pub fn dirichlet(n: usize, u: f64) -> f64 {
    let s = (u / 2.0).sin();
    if s.abs() < 1e-12 {
        (n * n) as f64
    } else {
        ((n as f64 * u / 2.0).sin() / s).powi(2)
    }
}

/// Deterministic pseudo-random numbers in `[0, 1)` for fixed test inputs.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}
