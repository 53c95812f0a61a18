//! Planar G-clusters: unions of cyclic (optionally dihedral) orbits that are
//! symmetric under inversion, `C = {±v_1, …, ±v_k}`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Points closer than this are the same cluster site.
pub const EPS_DEDUPE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSpec {
    /// Order of the rotation generator `a`.
    pub n: u32,
    /// One seed per shell.
    pub seeds: Vec<Vec2>,
    /// Also close the orbits under the reflection `b(α, β) = (α, −β)`.
    pub use_reflection: bool,
}

impl ClusterSpec {
    pub fn new(n: u32, seeds: Vec<Vec2>) -> Self {
        ClusterSpec { n, seeds, use_reflection: false }
    }

    /// One-shell cluster `C_n(x, y)`.
    pub fn single(n: u32, x: f64, y: f64) -> Self {
        ClusterSpec::new(n, vec![Vec2::new(x, y)])
    }

    pub fn with_reflection(mut self, on: bool) -> Self {
        self.use_reflection = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!("n must be even, got {}", self.n)));
        }
        if self.n < 4 {
            return Err(Error::InvalidSpec(format!("n must be at least 4, got {}", self.n)));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidSpec("at least one seed is required".into()));
        }
        for (i, s) in self.seeds.iter().enumerate() {
            if !(s.x.is_finite() && s.y.is_finite()) {
                return Err(Error::InvalidSpec(format!("seed {i} is not finite")));
            }
            if s.norm() <= EPS_DEDUPE {
                return Err(Error::InvalidSpec(format!("seed {i} is the origin")));
            }
        }
        Ok(())
    }
}

/// `a^j p`, where `a` is the rotation by `2π/n`.
///
/// The power is reduced modulo `n` first, so a full cycle returns `p` bit for bit.
pub fn apply_rotation(p: Vec2, n: u32, j: i64) -> Vec2 {
    assert!(n >= 1, "rotation order must be positive");
    let r = j.rem_euclid(n as i64);
    if r == 0 {
        return p;
    }
    p.rotated(TAU * r as f64 / n as f64)
}

/// The reflection generator `b`.
pub fn apply_reflection(p: Vec2) -> Vec2 {
    Vec2::new(p.x, -p.y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GCluster {
    /// `v_1 … v_k` followed by `−v_1 … −v_k`.
    points: Vec<Vec2>,
    reps: Vec<Vec2>,
    /// Shell index of each representative.
    shells: Vec<usize>,
    spec: ClusterSpec,
}

impl GCluster {
    /// Cluster from hand-entered representatives, without checking that they form
    /// a group orbit. Sites must be pairwise distinct and nonzero.
    pub fn from_reps(reps: Vec<Vec2>, spec: ClusterSpec) -> Result<GCluster> {
        let points: Vec<Vec2> = reps.iter().copied().chain(reps.iter().map(|v| -*v)).collect();
        for (i, p) in points.iter().enumerate() {
            if p.norm() <= EPS_DEDUPE || points[i + 1..].iter().any(|q| q.dist(*p) < EPS_DEDUPE) {
                return Err(Error::DegenerateCluster(format!("site {i} is zero or repeated")));
            }
        }
        let shells = vec![0; reps.len()];
        Ok(GCluster { points, reps, shells, spec })
    }

    /// All `2k` sites in canonical order (`v_1 … v_k, −v_1 … −v_k`).
    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn reps(&self) -> &[Vec2] {
        &self.reps
    }

    pub fn shells(&self) -> &[usize] {
        &self.shells
    }

    pub fn spec(&self) -> &ClusterSpec {
        &self.spec
    }

    /// Superspace dimension.
    pub fn k(&self) -> usize {
        self.reps.len()
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn max_radius(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Index of the site within `tol` of `p`, if any.
    pub fn find(&self, p: Vec2, tol: f64) -> Option<usize> {
        self.points.iter().position(|q| q.dist(p) <= tol)
    }

    /// Sites of shell `s`, in canonical order.
    pub fn shell_points(&self, s: usize) -> impl Iterator<Item = Vec2> + '_ {
        let k = self.k();
        self.points
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.shells[i % k] == s)
            .map(|(_, p)| *p)
    }
}

fn orbit(seed: Vec2, n: u32, reflect: bool) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::with_capacity(2 * n as usize);
    let mut push = |p: Vec2| {
        if !out.iter().any(|q| q.dist(p) < EPS_DEDUPE) {
            out.push(p);
        }
    };
    for j in 0..n as i64 {
        push(apply_rotation(seed, n, j));
    }
    if reflect {
        let mirrored = apply_reflection(seed);
        for j in 0..n as i64 {
            push(apply_rotation(mirrored, n, j));
        }
    }
    out
}

/// Whether `p` lies in the closed-open half plane of polar angles `[0, π)`.
fn in_upper_half(p: Vec2) -> bool {
    p.y > EPS_DEDUPE || (p.y.abs() <= EPS_DEDUPE && p.x > 0.0)
}

fn canonical_angle(p: Vec2) -> f64 {
    if p.y.abs() <= EPS_DEDUPE {
        if p.x > 0.0 {
            0.0
        } else {
            PI
        }
    } else {
        p.angle()
    }
}

pub fn build_cluster(spec: &ClusterSpec) -> Result<GCluster> {
    spec.validate()?;
    let mut all: Vec<Vec2> = Vec::new();
    let mut reps: Vec<Vec2> = Vec::new();
    let mut shells: Vec<usize> = Vec::new();

    for (s, &seed) in spec.seeds.iter().enumerate() {
        let shell = orbit(seed, spec.n, spec.use_reflection);
        for p in &shell {
            if all.iter().any(|q| q.dist(*p) < EPS_DEDUPE) {
                return Err(Error::DegenerateCluster(format!(
                    "orbit of seed {s} collides with an earlier shell"
                )));
            }
            if !shell.iter().any(|q| q.dist(-*p) < EPS_DEDUPE) {
                return Err(Error::DegenerateCluster(format!(
                    "orbit of seed {s} is not inversion symmetric"
                )));
            }
        }
        let mut upper: Vec<Vec2> = shell.iter().copied().filter(|p| in_upper_half(*p)).collect();
        if 2 * upper.len() != shell.len() {
            return Err(Error::DegenerateCluster(format!(
                "orbit of seed {s} does not split into ± pairs"
            )));
        }
        upper.sort_by(|a, b| canonical_angle(*a).total_cmp(&canonical_angle(*b)));
        shells.extend(std::iter::repeat_n(s, upper.len()));
        reps.extend(upper);
        all.extend(shell);
    }

    let points: Vec<Vec2> = reps.iter().copied().chain(reps.iter().map(|v| -*v)).collect();
    Ok(GCluster { points, reps, shells, spec: spec.clone() })
}

/// Minimum Euclidean distance between two distinct sites.
pub fn min_intersite_distance(c: &GCluster) -> f64 {
    let pts = c.points();
    let mut best = f64::INFINITY;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.min(p.dist(*q));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: Vec2, b: Vec2) -> bool {
        a.dist(b) < 1e-12
    }

    #[test]
    fn rotation_examples() {
        assert!(close(apply_rotation(Vec2::new(1.0, 0.0), 4, 1), Vec2::new(0.0, 1.0)));
        assert!(close(
            apply_rotation(Vec2::new(1.0, 0.0), 8, 1),
            Vec2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)
        ));
        let p = Vec2::new(1.1, 1.3);
        assert_eq!(apply_rotation(p, 10, 10), p);
        assert!(close(apply_rotation(p, 10, -1), apply_rotation(p, 10, 9)));
    }

    #[test]
    fn c8_listing() {
        let c = build_cluster(&ClusterSpec::single(8, 1.0, 0.0)).unwrap();
        assert_eq!(c.points().len(), 8);
        assert_eq!(c.k(), 4);
        let h = FRAC_1_SQRT_2;
        let expected = [
            Vec2::new(1.0, 0.0),
            Vec2::new(h, h),
            Vec2::new(0.0, 1.0),
            Vec2::new(-h, h),
        ];
        for (r, e) in c.reps().iter().zip(expected) {
            assert!(close(*r, e), "{r:?} vs {e:?}");
        }
        for e in expected {
            assert!(c.find(-e, 1e-12).is_some());
        }
    }

    #[test]
    fn two_shell_c10() {
        let spec = ClusterSpec::new(10, vec![Vec2::new(1.0, 0.0), Vec2::new(1.1, 1.3)]);
        let c = build_cluster(&spec).unwrap();
        assert_eq!(c.points().len(), 20);
        assert_eq!(c.k(), 10);
        assert_eq!(c.shells(), &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert_eq!(c.shell_points(1).count(), 10);
    }

    #[test]
    fn c12_has_six_reps() {
        let c = build_cluster(&ClusterSpec::single(12, 1.0, 0.0)).unwrap();
        assert_eq!(c.k(), 6);
        assert_eq!(c.points().len(), 12);
    }

    #[test]
    fn reflection_matches_cyclic_on_mirror_line() {
        let a = build_cluster(&ClusterSpec::single(12, 1.0, 0.0)).unwrap();
        let b = build_cluster(&ClusterSpec::single(12, 1.0, 0.0).with_reflection(true)).unwrap();
        assert_eq!(a.points(), b.points());
        // a generic seed doubles the orbit under the dihedral group
        let d = build_cluster(&ClusterSpec::single(8, 1.0, 0.3).with_reflection(true)).unwrap();
        assert_eq!(d.points().len(), 16);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            build_cluster(&ClusterSpec::single(7, 1.0, 0.0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            build_cluster(&ClusterSpec::single(2, 1.0, 0.0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            build_cluster(&ClusterSpec::single(8, 0.0, 0.0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(build_cluster(&ClusterSpec::new(8, vec![])), Err(Error::InvalidSpec(_))));
        // second shell equal to the first one rotated
        let spec = ClusterSpec::new(8, vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]);
        assert!(matches!(build_cluster(&spec), Err(Error::DegenerateCluster(_))));
    }

    #[test]
    fn min_distance_examples() {
        let d = |n| min_intersite_distance(&build_cluster(&ClusterSpec::single(n, 1.0, 0.0)).unwrap());
        // brute force over pairs, compared with the chord of the regular n-gon
        assert!((d(12) - 2.0 * (PI / 12.0).sin()).abs() < 1e-12);
        assert!((d(12) - 0.51764).abs() < 1e-5);
        assert!((d(8) - 0.76537).abs() < 1e-5);
        assert!((d(4) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn deterministic_rep_order() {
        let spec = ClusterSpec::new(14, vec![Vec2::new(0.3, -0.7), Vec2::new(2.0, 0.1)]);
        let a = build_cluster(&spec).unwrap();
        let b = build_cluster(&spec).unwrap();
        assert_eq!(a, b);
    }
}
