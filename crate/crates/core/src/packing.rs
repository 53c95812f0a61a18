//! Greedy cluster packing: lattice points of a ball around `t` are visited in
//! increasing distance to `t + E`; each projection that keeps the minimal
//! distance becomes a seed and immediately tries to surround itself with a
//! translated copy of the cluster.

use rayon::prelude::*;

use crate::cluster::GCluster;
use crate::error::{check_dim, Error, Result};
use crate::geom::Vec2;
use crate::spatial::{self, GridIndex};
use crate::strip::odometer_step;
use crate::superspace::Embedding;

/// Default tolerance on the `≥ δ` comparison.
pub const DEFAULT_DELTA_SLACK: f64 = 1e-9;
/// Proposals closer than this to an existing point are duplicates.
pub const EPS_DUP: f64 = 1e-9;
/// `d(x)` values are compared on a grid of this spacing, so rounding noise
/// between symmetric images does not override the lexicographic tie-break.
pub const EPS_TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PackingConfig {
    pub t: Vec<f64>,
    /// Ball radius in superspace.
    pub radius: f64,
    /// Minimal plane distance δ.
    pub delta: f64,
    pub delta_slack: f64,
    pub cluster: GCluster,
    pub budget: u64,
}

impl PackingConfig {
    pub fn new(cluster: GCluster, radius: f64, delta: f64) -> Self {
        PackingConfig {
            t: vec![0.0; cluster.k()],
            radius,
            delta,
            delta_slack: DEFAULT_DELTA_SLACK,
            cluster,
            budget: crate::DEFAULT_BUDGET,
        }
    }

    pub fn with_t(mut self, t: Vec<f64>) -> Self {
        self.t = t;
        self
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        check_dim(k, self.t.len())?;
        check_dim(k, self.cluster.k())?;
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("R must be positive, got {}", self.radius)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be positive, got {}", self.delta)));
        }
        if !(self.delta_slack >= 0.0) {
            return Err(Error::InvalidArgument("delta_slack must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Seed,
    ClusterMember,
}

impl PointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PointKind::Seed => "seed",
            PointKind::ClusterMember => "cluster_member",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackedPoint {
    pub pos: Vec2,
    pub kind: PointKind,
    /// Index of the spawning seed; a seed is its own parent.
    pub parent: usize,
    /// `d(x)` of the parent seed.
    pub d_seed: f64,
}

/// What happened to one candidate during [`greedy_pack`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Seed,
    TooClose,
    Duplicate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub lift: Vec<i64>,
    pub d: f64,
}

#[derive(Debug, Clone)]
pub struct Packing {
    pub points: Vec<PackedPoint>,
    pub config: PackingConfig,
    /// Per candidate, in processing order.
    pub outcomes: Vec<Outcome>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<Vec2> {
        self.points.iter().map(|p| p.pos).collect()
    }

    pub fn seeds(&self) -> impl Iterator<Item = (usize, &PackedPoint)> + '_ {
        self.points.iter().enumerate().filter(|(_, p)| p.kind == PointKind::Seed)
    }

    /// Number of sites of `seed + C` present in the packing (any provenance),
    /// per cluster shell.
    pub fn shell_occupancy(&self, seed: usize, index: &GridIndex) -> Vec<usize> {
        let c = &self.config.cluster;
        let center = self.points[seed].pos;
        let shells = c.shells().iter().copied().max().map_or(0, |s| s + 1);
        let mut counts = vec![0; shells];
        let k = c.k();
        for (i, &v) in c.points().iter().enumerate() {
            if index.nearest_within(center + v, 1e-6).is_some() {
                counts[c.shells()[i % k]] += 1;
            }
        }
        counts
    }
}

/// Lattice points with `‖x − t‖ < R`, sorted by `d(x)` then by lift.
pub fn candidate_list(e: &Embedding, cfg: &PackingConfig) -> Result<Vec<Candidate>> {
    cfg.validate(e.k())?;
    let r = cfg.radius;
    let ranges: Vec<(i64, i64)> =
        cfg.t.iter().map(|&ti| ((ti - r).ceil() as i64, (ti + r).floor() as i64)).collect();
    let volume: f64 = ranges.iter().map(|(lo, hi)| (hi - lo + 1).max(0) as f64).product();
    if volume > cfg.budget as f64 {
        return Err(Error::RegionTooLarge { candidates: volume, budget: cfg.budget });
    }
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let r2 = r * r;
    let (lo0, hi0) = ranges[0];
    let mut out: Vec<Candidate> = (lo0..=hi0)
        .into_par_iter()
        .flat_map_iter(|x0| {
            let mut found = Vec::new();
            let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            x[0] = x0;
            loop {
                let n2: f64 = x.iter().zip(&cfg.t).map(|(&a, &b)| (a as f64 - b).powi(2)).sum();
                if n2 < r2 {
                    found.push(Candidate { d: e.lattice_distance(&x, &cfg.t), lift: x.clone() });
                }
                if !odometer_step(&mut x[1..], &ranges[1..]) {
                    break;
                }
            }
            found
        })
        .collect();
    out.par_sort_by(|a, b| tie_key(a.d).cmp(&tie_key(b.d)).then_with(|| a.lift.cmp(&b.lift)));
    Ok(out)
}

#[inline]
fn tie_key(d: f64) -> i64 {
    (d / EPS_TIE).round() as i64
}

struct Accumulator {
    index: GridIndex,
    points: Vec<PackedPoint>,
    reach: f64,
    min_dist: f64,
}

enum Verdict {
    Accept,
    TooClose,
    Duplicate,
}

impl Accumulator {
    fn check(&self, p: Vec2) -> Verdict {
        let mut too_close = false;
        let mut duplicate = false;
        self.index.any_within(p, self.reach, |_, d| {
            if d < EPS_DUP {
                duplicate = true;
                return true;
            }
            if d < self.min_dist {
                too_close = true;
            }
            false
        });
        if duplicate {
            Verdict::Duplicate
        } else if too_close {
            Verdict::TooClose
        } else {
            Verdict::Accept
        }
    }

    fn push(&mut self, p: PackedPoint) -> usize {
        self.index.insert(p.pos);
        self.points.push(p);
        self.points.len() - 1
    }
}

/// Runs the greedy packing over [`candidate_list`].
pub fn greedy_pack(e: &Embedding, cfg: &PackingConfig) -> Result<Packing> {
    let candidates = candidate_list(e, cfg)?;
    Ok(greedy_pack_candidates(e, cfg, &candidates))
}

/// The greedy pass over an explicit, already ordered candidate list.
pub fn greedy_pack_candidates(e: &Embedding, cfg: &PackingConfig, candidates: &[Candidate]) -> Packing {
    let mut acc = Accumulator {
        index: GridIndex::new(cfg.delta),
        points: Vec::new(),
        reach: cfg.delta,
        min_dist: cfg.delta - cfg.delta_slack,
    };
    let mut outcomes = Vec::with_capacity(candidates.len());
    for cand in candidates {
        let pos = e.project_lattice(&cand.lift);
        match acc.check(pos) {
            Verdict::Duplicate => {
                outcomes.push(Outcome::Duplicate);
                continue;
            }
            Verdict::TooClose => {
                outcomes.push(Outcome::TooClose);
                continue;
            }
            Verdict::Accept => outcomes.push(Outcome::Seed),
        }
        let seed = acc.points.len();
        acc.push(PackedPoint { pos, kind: PointKind::Seed, parent: seed, d_seed: cand.d });
        for &v in cfg.cluster.points() {
            let q = pos + v;
            if let Verdict::Accept = acc.check(q) {
                acc.push(PackedPoint { pos: q, kind: PointKind::ClusterMember, parent: seed, d_seed: cand.d });
            }
        }
    }
    Packing { points: acc.points, config: cfg.clone(), outcomes }
}

pub fn min_pairwise_distance(q: &Packing) -> Result<f64> {
    spatial::min_pairwise_distance(&q.positions()).ok_or(Error::TooFewPoints)
}
