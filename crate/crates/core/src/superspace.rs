//! The decomposition `R^k = E ⊕ E⊥` induced by a G-cluster.
//!
//! Pattern coordinates are the unnormalized pair `(⟨x, w1⟩, ⟨x, w2⟩)`, so a basis
//! vector `e_i` lands exactly on the representative `v_i`. Distances to `E` use the
//! orthonormal frame `w1/κ, w2/κ`.

use crate::cluster::GCluster;
use crate::error::{check_dim, Error, Result};
use crate::geom::Vec2;

/// Tolerance for the orthogonality and equal-norm checks on `w1`, `w2`.
pub const EPS_ORTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    w1: Vec<f64>,
    w2: Vec<f64>,
    kappa: f64,
    cluster: GCluster,
}

pub fn embed(c: &GCluster) -> Result<Embedding> {
    let w1: Vec<f64> = c.reps().iter().map(|v| v.x).collect();
    let w2: Vec<f64> = c.reps().iter().map(|v| v.y).collect();
    let n1 = dot(&w1, &w1).sqrt();
    let n2 = dot(&w2, &w2).sqrt();
    let cross = dot(&w1, &w2);
    if cross.abs() > EPS_ORTH {
        return Err(Error::EmbeddingDegenerate(format!("<w1, w2> = {cross:e}")));
    }
    if (n1 - n2).abs() > EPS_ORTH {
        return Err(Error::EmbeddingDegenerate(format!("|w1| = {n1}, |w2| = {n2}")));
    }
    if n1 <= 0.0 {
        return Err(Error::EmbeddingDegenerate("zero norm".into()));
    }
    Ok(Embedding { w1, w2, kappa: 0.5 * (n1 + n2), cluster: c.clone() })
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Embedding {
    pub fn k(&self) -> usize {
        self.w1.len()
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn w2(&self) -> &[f64] {
        &self.w2
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn cluster(&self) -> &GCluster {
        &self.cluster
    }

    /// `π x = (⟨x, w1⟩, ⟨x, w2⟩)`.
    pub fn project_par(&self, x: &[f64]) -> Result<Vec2> {
        check_dim(self.k(), x.len())?;
        Ok(Vec2::new(dot(x, &self.w1), dot(x, &self.w2)))
    }

    /// [`Self::project_par`] for a lattice point.
    pub fn project_lattice(&self, x: &[i64]) -> Vec2 {
        debug_assert_eq!(x.len(), self.k());
        let mut p = Vec2::ZERO;
        for ((&xi, &a), &b) in x.iter().zip(&self.w1).zip(&self.w2) {
            let xi = xi as f64;
            p.x += xi * a;
            p.y += xi * b;
        }
        p
    }

    /// Orthogonal projection of `x` onto `E`, as a k-vector.
    pub fn parallel_component(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.k(), x.len())?;
        let k2 = self.kappa * self.kappa;
        let a = dot(x, &self.w1) / k2;
        let b = dot(x, &self.w2) / k2;
        Ok(self.w1.iter().zip(&self.w2).map(|(u, v)| a * u + b * v).collect())
    }

    /// `x − π∥ x`, the component in `E⊥`.
    pub fn perp_component(&self, x: &[f64]) -> Result<Vec<f64>> {
        let par = self.parallel_component(x)?;
        Ok(x.iter().zip(par).map(|(a, b)| a - b).collect())
    }

    /// Euclidean distance from `x` to `E`.
    pub fn dist_to_e(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.k(), x.len())?;
        Ok(self.residual_norm(x.iter().copied()))
    }

    /// `d(x) = dist(x − t, E)` for a lattice point `x`; no allocation.
    pub fn lattice_distance(&self, x: &[i64], t: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.k());
        self.residual_norm(x.iter().zip(t).map(|(&a, &b)| a as f64 - b))
    }

    fn residual_norm<I>(&self, y: I) -> f64
    where
        I: Iterator<Item = f64> + Clone,
    {
        let k2 = self.kappa * self.kappa;
        let (mut a, mut b) = (0.0, 0.0);
        for ((yi, u), v) in y.clone().zip(&self.w1).zip(&self.w2) {
            a += yi * u;
            b += yi * v;
        }
        a /= k2;
        b /= k2;
        y.zip(&self.w1)
            .zip(&self.w2)
            .map(|((yi, u), v)| {
                let r = yi - a * u - b * v;
                r * r
            })
            .sum::<f64>()
            .sqrt()
    }
}
