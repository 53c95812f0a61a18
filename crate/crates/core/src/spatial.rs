//! Uniform grid over the plane for fixed-radius neighbour queries.

use std::collections::HashMap;

use crate::geom::Vec2;

#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Vec2>,
}

impl GridIndex {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "cell size must be positive");
        GridIndex { cell, cells: HashMap::new(), points: Vec::new() }
    }

    pub fn from_points(cell: f64, points: impl IntoIterator<Item = Vec2>) -> Self {
        let mut g = GridIndex::new(cell);
        for p in points {
            g.insert(p);
        }
        g
    }

    #[inline]
    fn key(&self, p: Vec2) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    /// Adds `p` and returns its index.
    pub fn insert(&mut self, p: Vec2) -> usize {
        let id = self.points.len();
        self.points.push(p);
        let key = self.key(p);
        self.cells.entry(key).or_default().push(id);
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    /// Calls `f(id, distance)` for every stored point within `radius` of `p`
    /// (inclusive). Stops early and returns `true` if `f` returns `true`.
    pub fn any_within(&self, p: Vec2, radius: f64, mut f: impl FnMut(usize, f64) -> bool) -> bool {
        let reach = (radius / self.cell).ceil().max(1.0) as i64;
        let (cx, cy) = self.key(p);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &id in ids {
                    let d = self.points[id].dist(p);
                    if d <= radius && f(id, d) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Indices of all points within `radius` of `p`, ascending.
    pub fn within(&self, p: Vec2, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.any_within(p, radius, |id, _| {
            out.push(id);
            false
        });
        out.sort_unstable();
        out
    }

    /// Nearest stored point within `radius`, if any.
    pub fn nearest_within(&self, p: Vec2, radius: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        self.any_within(p, radius, |id, d| {
            if best.is_none_or(|(bid, bd)| d < bd || (d == bd && id < bid)) {
                best = Some((id, d));
            }
            false
        });
        best
    }
}

/// Exact minimum pairwise distance, using a grid sized from the bounding box.
pub fn min_pairwise_distance(points: &[Vec2]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let bbox = crate::geom::bounding_box(points.iter().copied())?;
    let extent = (bbox.xmax - bbox.xmin).max(bbox.ymax - bbox.ymin);
    let mut cell = extent / (points.len() as f64).sqrt();
    if !(cell.is_finite() && cell > 0.0) {
        cell = 1.0;
    }
    loop {
        let grid = GridIndex::from_points(cell, points.iter().copied());
        let mut best = f64::INFINITY;
        for (i, &p) in points.iter().enumerate() {
            grid.any_within(p, cell, |j, d| {
                if j != i {
                    best = best.min(d);
                }
                false
            });
        }
        if best <= cell {
            return Some(best);
        }
        // every pair is farther apart than one cell; widen and retry
        cell *= 4.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_within(points: &[Vec2], p: Vec2, r: f64) -> Vec<usize> {
        (0..points.len()).filter(|&i| points[i].dist(p) <= r).collect()
    }

    fn brute_min(points: &[Vec2]) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                best = best.min(points[i].dist(points[j]));
            }
        }
        best
    }

    #[test]
    fn two_points() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)];
        assert_eq!(min_pairwise_distance(&pts), Some(1.0));
        assert_eq!(min_pairwise_distance(&pts[..1]), None);
    }

    #[test]
    fn coincident_points() {
        let pts = [Vec2::new(2.0, 3.0), Vec2::new(2.0, 3.0), Vec2::new(5.0, 3.0)];
        assert_eq!(min_pairwise_distance(&pts), Some(0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn neighbourhood_matches_brute_force(
            raw in prop::collection::vec((-20.0f64..20.0, -20.0f64..20.0), 1..2000),
            qx in -20.0f64..20.0,
            qy in -20.0f64..20.0,
            cell in 0.3f64..3.0,
            r in 0.0f64..3.0,
        ) {
            let pts: Vec<Vec2> = raw.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
            let grid = GridIndex::from_points(cell, pts.iter().copied());
            let q = Vec2::new(qx, qy);
            prop_assert_eq!(grid.within(q, r), brute_within(&pts, q, r));
        }

        #[test]
        fn min_distance_matches_scan(
            raw in prop::collection::vec((-50.0f64..50.0, -5.0f64..5.0), 2..400),
        ) {
            let pts: Vec<Vec2> = raw.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
            prop_assert_eq!(min_pairwise_distance(&pts).unwrap(), brute_min(&pts));
        }
    }
}
