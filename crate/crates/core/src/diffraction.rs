//! Kinematic diffraction of a finite planar point set: `I(q) = |Σ_p exp(i q·p)|²`
//! evaluated directly on a square wavevector grid.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Vec2;

pub const DEFAULT_QMAX: f64 = 2.0 * TAU;
pub const DEFAULT_RES: usize = 257;
/// Cap on `N · res²` phase evaluations.
pub const DEFAULT_WORK_BUDGET: u64 = 20_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionMap {
    pub qmax: f64,
    pub res: usize,
    /// Row-major, row index along `q_y` ascending.
    pub intensity: Vec<f64>,
    pub npoints: usize,
}

impl DiffractionMap {
    pub fn step(&self) -> f64 {
        2.0 * self.qmax / (self.res - 1) as f64
    }

    pub fn q_at(&self, ix: usize, iy: usize) -> Vec2 {
        let c = (self.res / 2) as f64;
        Vec2::new((ix as f64 - c) * self.step(), (iy as f64 - c) * self.step())
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.intensity[iy * self.res + ix]
    }

    /// `N²`, the forward-scattering intensity.
    pub fn peak_scale(&self) -> f64 {
        (self.npoints as f64).powi(2)
    }
}

pub fn intensity_map(points: &[Vec2], qmax: f64, res: usize) -> Result<DiffractionMap> {
    intensity_map_with_budget(points, qmax, res, DEFAULT_WORK_BUDGET)
}

pub fn intensity_map_with_budget(
    points: &[Vec2],
    qmax: f64,
    res: usize,
    budget: u64,
) -> Result<DiffractionMap> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if res < 3 || res.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("res must be odd and >= 3, got {res}")));
    }
    if !(qmax > 0.0 && qmax.is_finite()) {
        return Err(Error::InvalidArgument(format!("qmax must be positive, got {qmax}")));
    }
    let work = points.len() as f64 * (res * res) as f64;
    if work > budget as f64 {
        return Err(Error::BudgetExceeded { work, budget });
    }

    let half = (res / 2) as f64;
    let step = 2.0 * qmax / (res - 1) as f64;
    let qs: Vec<f64> = (0..res).map(|i| (i as f64 - half) * step).collect();
    // exp(i q_x p_x) for every (node, point); the y factor is formed per row
    let phase_x: Vec<(f64, f64)> = qs
        .iter()
        .flat_map(|&q| points.iter().map(move |p| (q * p.x).sin_cos()))
        .map(|(s, c)| (c, s))
        .collect();

    let n = points.len();
    let mut intensity = vec![0.0; res * res];
    intensity.par_chunks_mut(res).enumerate().for_each(|(iy, row)| {
        let qy = qs[iy];
        let phase_y: Vec<(f64, f64)> = points
            .iter()
            .map(|p| {
                let (s, c) = (qy * p.y).sin_cos();
                (c, s)
            })
            .collect();
        for (ix, out) in row.iter_mut().enumerate() {
            let px = &phase_x[ix * n..(ix + 1) * n];
            let (mut re, mut im) = (0.0, 0.0);
            for (&(cx, sx), &(cy, sy)) in px.iter().zip(&phase_y) {
                re += cx * cy - sx * sy;
                im += cx * sy + sx * cy;
            }
            *out = re * re + im * im;
        }
    });
    Ok(DiffractionMap { qmax, res, intensity, npoints: n })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub q: Vec2,
    pub intensity: f64,
    pub ix: usize,
    pub iy: usize,
}

/// Local maxima over the 8-neighbourhood with intensity `≥ rel_threshold · N²`,
/// strongest first. A plateau is reported once, at its lexicographically
/// smallest `(iy, ix)` node; a node with no strictly lower neighbour is not a peak.
pub fn peak_list(map: &DiffractionMap, rel_threshold: f64) -> Vec<Peak> {
    let res = map.res;
    let floor = rel_threshold * map.peak_scale();
    let eq_tol = 1e-12 * map.peak_scale();
    let mut peaks = Vec::new();
    for iy in 0..res {
        for ix in 0..res {
            let v = map.get(ix, iy);
            if v < floor {
                continue;
            }
            let mut is_peak = true;
            let mut has_lower = false;
            'nb: for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                    if jx < 0 || jy < 0 || jx >= res as i64 || jy >= res as i64 {
                        continue;
                    }
                    let w = map.get(jx as usize, jy as usize);
                    if w > v + eq_tol {
                        is_peak = false;
                        break 'nb;
                    }
                    if (w - v).abs() <= eq_tol {
                        // tied neighbour must come later in (iy, ix) order
                        if (jy as usize, jx as usize) < (iy, ix) {
                            is_peak = false;
                            break 'nb;
                        }
                    } else {
                        has_lower = true;
                    }
                }
            }
            if is_peak && has_lower {
                peaks.push(Peak { q: map.q_at(ix, iy), intensity: v, ix, iy });
            }
        }
    }
    peaks.sort_by(|a, b| {
        b.intensity
            .total_cmp(&a.intensity)
            .then_with(|| (a.iy, a.ix).cmp(&(b.iy, b.ix)))
    });
    peaks
}

/// Fraction of peaks whose image under rotation by `2π/n` lies within `q_tol` of a
/// peak of intensity within 20% (relative).
pub fn symmetry_score(peaks: &[Peak], n: u32, q_tol: f64) -> f64 {
    assert!(n >= 1, "rotation order must be positive");
    if peaks.is_empty() {
        return 1.0;
    }
    let angle = TAU / n as f64;
    let matched = peaks
        .iter()
        .filter(|p| {
            let target = p.q.rotated(angle);
            peaks.iter().any(|o| {
                o.q.dist(target) <= q_tol
                    && (o.intensity - p.intensity).abs() <= 0.2 * p.intensity.max(o.intensity)
            })
        })
        .count();
    matched as f64 / peaks.len() as f64
}
