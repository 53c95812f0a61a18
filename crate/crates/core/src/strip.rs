//! Strip projection: the lattice points of `Z^k` lying in `t + Λ + E`
//! (`Λ` the unit cube centred at the origin), projected to the plane.

use rayon::prelude::*;

use crate::cluster::GCluster;
use crate::error::{check_dim, Error, Result};
use crate::geom::{Rect, Vec2};
use crate::spatial::GridIndex;
use crate::superspace::Embedding;

/// Default slack added to the cube half-width.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Two pattern positions closer than this are the same site.
pub const EPS_MATCH: f64 = 1e-6;
/// Distinct-value tolerance for [`distance_spectrum`].
pub const EPS_SPEC: f64 = 1e-9;

const VERTEX_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StripConfig {
    pub t: Vec<f64>,
    pub tol: f64,
    /// Window on `π x` in pattern coordinates.
    pub region: Rect,
    /// Maximum candidate box volume for [`enumerate_pattern`].
    pub budget: u64,
}

impl StripConfig {
    pub fn new(k: usize, region: Rect) -> Self {
        StripConfig { t: vec![0.0; k], tol: DEFAULT_TOL, region, budget: crate::DEFAULT_BUDGET }
    }

    pub fn with_t(mut self, t: Vec<f64>) -> Self {
        self.t = t;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        check_dim(k, self.t.len())?;
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be >= 0, got {}", self.tol)));
        }
        if !self.region.has_positive_area() {
            return Err(Error::InvalidArgument("region must have positive area".into()));
        }
        Ok(())
    }

    fn half_width(&self) -> f64 {
        0.5 + self.tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternPoint {
    pub pos: Vec2,
    pub lift: Vec<i64>,
    /// `dist(lift − t, E)`.
    pub dperp: f64,
}

#[derive(Debug, Clone)]
pub struct Pattern {
    pub points: Vec<PatternPoint>,
    pub embedding: Embedding,
    pub config: StripConfig,
}

impl Pattern {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.points.iter().map(|p| p.pos)
    }

    pub fn index(&self) -> GridIndex {
        GridIndex::from_points(1.0, self.positions())
    }

    /// Points whose distance to the region boundary is at least `margin`.
    pub fn interior(&self, margin: f64) -> impl Iterator<Item = &PatternPoint> + '_ {
        let region = self.config.region;
        self.points.iter().filter(move |p| region.inner_margin(p.pos) >= margin)
    }
}

/// Constraint rows of the membership problem: `|y_i − α w1_i − β w2_i| ≤ h`.
#[inline]
fn vertex_feasible(w1: &[f64], w2: &[f64], y: &[f64], h: f64, a: f64, b: f64) -> bool {
    y.iter()
        .zip(w1)
        .zip(w2)
        .all(|((yi, u), v)| (yi - a * u - b * v).abs() <= h + VERTEX_SLACK)
}

/// Feasibility of `|y_i − α w1_i − β w2_i| ≤ h` for some `(α, β)`.
///
/// The feasible set is a bounded polygon (the normals `(w1_i, w2_i)` span the
/// plane), so it is non-empty iff one of its candidate vertices, the pairwise
/// intersections of constraint lines, satisfies every constraint.
fn slab_feasible(w1: &[f64], w2: &[f64], y: &[f64], h: f64) -> bool {
    let k = y.len();
    // least-squares point first; it settles the typical interior case
    let k2: f64 = w1.iter().map(|u| u * u).sum();
    let a0 = y.iter().zip(w1).map(|(p, q)| p * q).sum::<f64>() / k2;
    let b0 = y.iter().zip(w2).map(|(p, q)| p * q).sum::<f64>() / k2;
    if vertex_feasible(w1, w2, y, h, a0, b0) {
        return true;
    }
    for i in 0..k {
        for j in i + 1..k {
            let det = w1[i] * w2[j] - w2[i] * w1[j];
            if det.abs() < 1e-12 {
                continue;
            }
            for si in [-h, h] {
                for sj in [-h, h] {
                    let ri = y[i] + si;
                    let rj = y[j] + sj;
                    let a = (ri * w2[j] - w2[i] * rj) / det;
                    let b = (w1[i] * rj - ri * w1[j]) / det;
                    if vertex_feasible(w1, w2, y, h, a, b) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

pub fn in_strip(e: &Embedding, cfg: &StripConfig, x: &[i64]) -> Result<bool> {
    check_dim(e.k(), x.len())?;
    check_dim(e.k(), cfg.t.len())?;
    Ok(in_strip_unchecked(e, &cfg.t, cfg.half_width(), x))
}

fn in_strip_unchecked(e: &Embedding, t: &[f64], h: f64, x: &[i64]) -> bool {
    let y: Vec<f64> = x.iter().zip(t).map(|(&a, &b)| a as f64 - b).collect();
    slab_feasible(e.w1(), e.w2(), &y, h)
}

/// Convex polygon in the `(α, β)` parameter plane.
type Polygon = Vec<(f64, f64)>;

/// Keeps the part of `poly` where `u α + v β ≤ c`.
fn clip(poly: &Polygon, u: f64, v: f64, c: f64) -> Polygon {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for idx in 0..n {
        let p = poly[idx];
        let q = poly[(idx + 1) % n];
        let fp = u * p.0 + v * p.1 - c;
        let fq = u * q.0 + v * q.1 - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let s = fp / (fp - fq);
            out.push((p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1)));
        }
    }
    out
}

/// Range of `t_i + α w1_i + β w2_i` over the polygon.
fn coordinate_range(poly: &Polygon, t: f64, u: f64, v: f64) -> (f64, f64) {
    poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(a, b)| {
        let f = t + a * u + b * v;
        (lo.min(f), hi.max(f))
    })
}

struct Enumerator<'a> {
    e: &'a Embedding,
    cfg: &'a StripConfig,
    h: f64,
}

impl Enumerator<'_> {
    /// `(α, β)` rectangle that contains the parameters of every strip point with
    /// `π x` in the region.
    fn parameter_box(&self) -> Polygon {
        let e = self.e;
        let k2 = e.kappa() * e.kappa();
        let l1 = |w: &[f64]| w.iter().map(|a| a.abs()).sum::<f64>();
        let t1: f64 = self.cfg.t.iter().zip(e.w1()).map(|(a, b)| a * b).sum();
        let t2: f64 = self.cfg.t.iter().zip(e.w2()).map(|(a, b)| a * b).sum();
        let r = &self.cfg.region;
        let s1 = self.h * l1(e.w1()) + 1e-7;
        let s2 = self.h * l1(e.w2()) + 1e-7;
        let (a_lo, a_hi) = ((r.xmin - t1 - s1) / k2, (r.xmax - t1 + s1) / k2);
        let (b_lo, b_hi) = ((r.ymin - t2 - s2) / k2, (r.ymax - t2 + s2) / k2);
        vec![(a_lo, b_lo), (a_hi, b_lo), (a_hi, b_hi), (a_lo, b_hi)]
    }

    fn integer_range(&self, poly: &Polygon, i: usize) -> (i64, i64) {
        let (lo, hi) = coordinate_range(poly, self.cfg.t[i], self.e.w1()[i], self.e.w2()[i]);
        ((lo - self.h - 1e-9).ceil() as i64, (hi + self.h + 1e-9).floor() as i64)
    }

    fn box_volume(&self, poly: &Polygon) -> f64 {
        (0..self.e.k())
            .map(|i| {
                let (lo, hi) = self.integer_range(poly, i);
                (hi - lo + 1).max(0) as f64
            })
            .product()
    }

    fn descend(&self, poly: &Polygon, prefix: &mut Vec<i64>, out: &mut Vec<PatternPoint>) {
        let i = prefix.len();
        let k = self.e.k();
        if i == k {
            self.leaf(prefix, out);
            return;
        }
        let (lo, hi) = self.integer_range(poly, i);
        for xi in lo..=hi {
            if let Some(sub) = self.restrict(poly, i, xi) {
                prefix.push(xi);
                self.descend(&sub, prefix, out);
                prefix.pop();
            }
        }
    }

    /// Clip `poly` to the slab of coordinate `i` taking the value `xi`.
    fn restrict(&self, poly: &Polygon, i: usize, xi: i64) -> Option<Polygon> {
        let (u, v) = (self.e.w1()[i], self.e.w2()[i]);
        let c = xi as f64 - self.cfg.t[i];
        let slack = self.h + 1e-9;
        let p = clip(poly, u, v, c + slack);
        if p.is_empty() {
            return None;
        }
        let p = clip(&p, -u, -v, -(c - slack));
        (!p.is_empty()).then_some(p)
    }

    fn leaf(&self, x: &[i64], out: &mut Vec<PatternPoint>) {
        let pos = self.e.project_lattice(x);
        if !self.cfg.region.contains(pos) {
            return;
        }
        if !in_strip_unchecked(self.e, &self.cfg.t, self.h, x) {
            return;
        }
        out.push(PatternPoint { pos, lift: x.to_vec(), dperp: self.e.lattice_distance(x, &self.cfg.t) });
    }
}

/// All `x ∈ Z^k` in the strip with `π x` inside the region, sorted by lift.
pub fn enumerate_pattern(e: &Embedding, cfg: &StripConfig) -> Result<Pattern> {
    cfg.validate(e.k())?;
    let en = Enumerator { e, cfg, h: cfg.half_width() };
    let root = en.parameter_box();
    let volume = en.box_volume(&root);
    if volume > cfg.budget as f64 {
        return Err(Error::RegionTooLarge { candidates: volume, budget: cfg.budget });
    }
    let (lo, hi) = en.integer_range(&root, 0);
    let mut points: Vec<PatternPoint> = (lo..=hi)
        .into_par_iter()
        .flat_map_iter(|x0| {
            let mut out = Vec::new();
            if let Some(sub) = en.restrict(&root, 0, x0) {
                let mut prefix = vec![x0];
                en.descend(&sub, &mut prefix, &mut out);
            }
            out
        })
        .collect();
    points.sort_by(|a, b| a.lift.cmp(&b.lift));
    Ok(Pattern { points, embedding: e.clone(), config: cfg.clone() })
}

/// The members of `{x ± e_i}` that lie in the strip, in the order
/// `x + e_1, …, x + e_k, x − e_1, …, x − e_k`.
pub fn arithmetic_neighbours(e: &Embedding, cfg: &StripConfig, x: &[i64]) -> Result<Vec<Vec<i64>>> {
    if !in_strip(e, cfg, x)? {
        return Err(Error::NotInStrip);
    }
    let k = e.k();
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        for i in 0..k {
            let mut y = x.to_vec();
            y[i] += sign;
            if in_strip_unchecked(e, &cfg.t, cfg.half_width(), &y) {
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// Fraction of the sites of `center + C` present in the pattern.
pub fn occupation(p: &Pattern, c: &GCluster, center: Vec2) -> Result<f64> {
    let index = p.index();
    occupation_with(&index, c, center)
}

/// [`occupation`] against a prebuilt index of the pattern positions.
pub fn occupation_with(index: &GridIndex, c: &GCluster, center: Vec2) -> Result<f64> {
    if index.nearest_within(center, EPS_MATCH).is_none() {
        return Err(Error::CenterNotInPattern);
    }
    let hits = c
        .points()
        .iter()
        .filter(|&&v| index.nearest_within(center + v, EPS_MATCH).is_some())
        .count();
    Ok(hits as f64 / c.points().len() as f64)
}

/// Occupation of every pattern point at least `margin` from the region boundary.
pub fn interior_occupations(p: &Pattern, c: &GCluster, margin: f64) -> Vec<(usize, f64)> {
    let index = p.index();
    p.points
        .iter()
        .enumerate()
        .filter(|(_, q)| p.config.region.inner_margin(q.pos) >= margin)
        .map(|(i, q)| (i, occupation_with(&index, c, q.pos).expect("pattern point is indexed")))
        .collect()
}

/// Lattice region scanned by [`distance_spectrum_in`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchRegion {
    /// `{−m, …, m}^k`.
    Cube(i64),
    /// `{x : ‖x − t‖ < R}`.
    Ball(f64),
}

/// The `count` smallest distinct values of `dist(x − t, E)` over `x ∈ {−m..m}^k`.
pub fn distance_spectrum(e: &Embedding, t: &[f64], m: i64, count: usize) -> Result<Vec<f64>> {
    distance_spectrum_in(e, t, SearchRegion::Cube(m), count, crate::DEFAULT_BUDGET)
}

pub fn distance_spectrum_in(
    e: &Embedding,
    t: &[f64],
    region: SearchRegion,
    count: usize,
    budget: u64,
) -> Result<Vec<f64>> {
    let k = e.k();
    check_dim(k, t.len())?;
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    let ranges: Vec<(i64, i64)> = match region {
        SearchRegion::Cube(m) => {
            if m < 1 {
                return Err(Error::InvalidArgument("halfwidth must be >= 1".into()));
            }
            vec![(-m, m); k]
        }
        SearchRegion::Ball(r) => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument("radius must be positive".into()));
            }
            t.iter().map(|&ti| ((ti - r).ceil() as i64, (ti + r).floor() as i64)).collect()
        }
    };
    let volume: f64 = ranges.iter().map(|(lo, hi)| (hi - lo + 1) as f64).product();
    if volume > budget as f64 {
        return Err(Error::RegionTooLarge { candidates: volume, budget });
    }
    let ball_r2 = match region {
        SearchRegion::Ball(r) => Some(r * r),
        SearchRegion::Cube(_) => None,
    };

    let (lo0, hi0) = ranges[0];
    let smallest = (lo0..=hi0)
        .into_par_iter()
        .map(|x0| {
            let mut best = SmallestDistinct::new(count);
            let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            x[0] = x0;
            loop {
                let inside = ball_r2.is_none_or(|r2| {
                    x.iter().zip(t).map(|(&a, &b)| (a as f64 - b).powi(2)).sum::<f64>() < r2
                });
                if inside {
                    best.offer(e.lattice_distance(&x, t));
                }
                if !odometer_step(&mut x[1..], &ranges[1..]) {
                    break;
                }
            }
            best
        })
        .reduce(|| SmallestDistinct::new(count), SmallestDistinct::merge);
    Ok(smallest.values)
}

/// Advances `x` through the product of inclusive `ranges`; false when exhausted.
pub(crate) fn odometer_step(x: &mut [i64], ranges: &[(i64, i64)]) -> bool {
    for i in (0..x.len()).rev() {
        if x[i] < ranges[i].1 {
            x[i] += 1;
            return true;
        }
        x[i] = ranges[i].0;
    }
    false
}

/// Sorted list of at most `cap` values pairwise more than [`EPS_SPEC`] apart,
/// keeping the smallest member of each near-equal group.
#[derive(Debug, Clone)]
struct SmallestDistinct {
    cap: usize,
    values: Vec<f64>,
}

impl SmallestDistinct {
    fn new(cap: usize) -> Self {
        SmallestDistinct { cap, values: Vec::with_capacity(cap + 1) }
    }

    fn offer(&mut self, v: f64) {
        if self.values.len() == self.cap && v > self.values[self.cap - 1] + EPS_SPEC {
            return;
        }
        let pos = self.values.partition_point(|&a| a < v);
        if pos > 0 && v - self.values[pos - 1] <= EPS_SPEC {
            return;
        }
        if pos < self.values.len() && self.values[pos] - v <= EPS_SPEC {
            self.values[pos] = v;
            return;
        }
        self.values.insert(pos, v);
        self.values.truncate(self.cap);
    }

    fn merge(mut self, other: SmallestDistinct) -> SmallestDistinct {
        for v in other.values {
            self.offer(v);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{build_cluster, ClusterSpec};
    use crate::superspace::embed;

    fn emb(n: u32) -> Embedding {
        embed(&build_cluster(&ClusterSpec::single(n, 1.0, 0.0)).unwrap()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let e = emb(8);
        let cfg = StripConfig::new(4, Rect::centered(5.0));
        assert!(in_strip(&e, &cfg, &[0, 0, 0, 0]).unwrap());
        assert!(in_strip(&e, &cfg, &[1, 0, 0, 0]).unwrap());
        assert!(!in_strip(&e, &cfg, &[3, 0, -3, 0]).unwrap());
        assert_eq!(
            in_strip(&e, &cfg, &[0, 0, 0]),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn c4_pattern_is_the_square_lattice() {
        let e = emb(4);
        let cfg = StripConfig::new(2, Rect::centered(2.2));
        let p = enumerate_pattern(&e, &cfg).unwrap();
        assert_eq!(p.len(), 25);
        let lifts: Vec<Vec<i64>> = p.points.iter().map(|q| q.lift.clone()).collect();
        let mut expected = Vec::new();
        for a in -2..=2 {
            for b in -2..=2 {
                expected.push(vec![a, b]);
            }
        }
        assert_eq!(lifts, expected);
        let inner = p.points.iter().find(|q| q.lift == [0, 0]).unwrap();
        assert_eq!(occupation(&p, e.cluster(), inner.pos).unwrap(), 1.0);
        let nbrs = arithmetic_neighbours(&e, &cfg, &[0, 0]).unwrap();
        assert_eq!(nbrs.len(), 4);
    }

    #[test]
    fn not_in_strip_error() {
        let e = emb(8);
        let cfg = StripConfig::new(4, Rect::centered(5.0));
        assert_eq!(arithmetic_neighbours(&e, &cfg, &[3, 0, -3, 0]), Err(Error::NotInStrip));
    }

    #[test]
    fn center_must_be_in_pattern() {
        let e = emb(8);
        let p = enumerate_pattern(&e, &StripConfig::new(4, Rect::centered(3.0))).unwrap();
        assert_eq!(
            occupation(&p, e.cluster(), Vec2::new(0.123, 0.456)),
            Err(Error::CenterNotInPattern)
        );
    }

    #[test]
    fn region_budget() {
        let e = emb(12);
        let mut cfg = StripConfig::new(6, Rect::centered(1e6));
        assert!(matches!(enumerate_pattern(&e, &cfg), Err(Error::RegionTooLarge { .. })));
        cfg.region = Rect::centered(3.0);
        cfg.budget = 10;
        assert!(matches!(enumerate_pattern(&e, &cfg), Err(Error::RegionTooLarge { .. })));
    }

    #[test]
    fn invalid_strip_config() {
        let e = emb(8);
        let cfg = StripConfig::new(4, Rect::new(0.0, 0.0, 0.0, 1.0));
        assert!(matches!(enumerate_pattern(&e, &cfg), Err(Error::InvalidArgument(_))));
        let cfg = StripConfig::new(4, Rect::centered(1.0)).with_tol(-1.0);
        assert!(matches!(enumerate_pattern(&e, &cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn smallest_distinct_dedupes() {
        let mut s = SmallestDistinct::new(3);
        for v in [0.5, 0.1, 0.1 + 1e-12, 0.3, 0.2, 0.0, 0.2] {
            s.offer(v);
        }
        assert_eq!(s.values, vec![0.0, 0.1, 0.2]);
    }

    #[test]
    fn spectrum_errors() {
        let e = emb(8);
        assert!(distance_spectrum(&e, &[0.0; 4], 0, 3).is_err());
        assert!(distance_spectrum(&e, &[0.0; 4], 3, 0).is_err());
        assert!(matches!(
            distance_spectrum_in(&e, &[0.0; 4], SearchRegion::Cube(50), 3, 1000),
            Err(Error::RegionTooLarge { .. })
        ));
    }
}
