//! Executes a [`JobConfig`]: builds the pipeline, writes artifacts and a manifest.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use quasiproj::diffraction::{intensity_map, peak_list, DiffractionMap};
use quasiproj::export::{
    write_packing_csv, write_pattern_csv, write_peaks_csv, write_pgm, write_spectrum_csv, write_svg, SvgStyle,
};
use quasiproj::packing::{self, candidate_list, greedy_pack_candidates, Outcome, PackingConfig};
use quasiproj::strip::{distance_spectrum_in, enumerate_pattern, interior_occupations, SearchRegion, StripConfig};
use quasiproj::{build_cluster, embed, Embedding, GCluster, Vec2};

use crate::config::{render_config, Artifact, ConfigErrors, DiffractionSection, JobConfig, Mode, SpectrumRegion};

pub const MANIFEST_NAME: &str = "manifest.txt";

#[derive(Debug, Error)]
pub enum JobError {
    #[error("{0}")]
    Config(#[from] ConfigErrors),
    #[error("{context}: {source}")]
    Pipeline { context: &'static str, source: quasiproj::Error },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

impl JobError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        use quasiproj::Error as E;
        match self {
            JobError::Config(_) => 2,
            JobError::Pipeline { source, .. } => match source {
                E::RegionTooLarge { .. } | E::BudgetExceeded { .. } => 3,
                E::InvalidSpec(_) | E::DimensionMismatch { .. } | E::InvalidArgument(_) => 2,
                E::EmbeddingDegenerate(_) | E::DegenerateCluster(_) | E::NotInStrip | E::CenterNotInPattern => 4,
                E::TooFewPoints | E::EmptyPointSet => 1,
            },
            JobError::Invariant(_) => 4,
            JobError::Io { .. } | JobError::Input(_) => 1,
        }
    }
}

fn pipeline(context: &'static str) -> impl FnOnce(quasiproj::Error) -> JobError {
    move |source| JobError::Pipeline { context, source }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Replaces `[output] dir`.
    pub out: Option<PathBuf>,
    /// Also write `candidates.csv` with the greedy ordering (pack mode).
    pub seed_report: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub dir: PathBuf,
    /// Artifacts in write order; the manifest itself is not listed.
    pub entries: Vec<ManifestEntry>,
    /// Human-readable one-line facts about the run.
    pub summary: Vec<String>,
}

/// Collects artifacts in memory, then writes them and the manifest.
struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn add(&mut self, name: &str, f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) {
        let mut buf = Vec::new();
        f(&mut buf).expect("writing to memory cannot fail");
        self.files.push((name.to_string(), buf));
    }

    fn flush(self, dir: &Path, cfg_text: &str) -> Result<Vec<ManifestEntry>, JobError> {
        fs::create_dir_all(dir).map_err(|source| JobError::Io {
            context: format!("creating {}", dir.display()),
            source,
        })?;
        let mut entries = Vec::new();
        let mut manifest = String::new();
        for (name, data) in &self.files {
            let path = dir.join(name);
            fs::write(&path, data).map_err(|source| JobError::Io {
                context: format!("writing {}", path.display()),
                source,
            })?;
            let entry = ManifestEntry { name: name.clone(), bytes: data.len(), sha256: sha256_hex(data) };
            let _ = writeln!(manifest, "{}  {:>10}  {}", entry.sha256, entry.bytes, entry.name);
            entries.push(entry);
        }
        manifest.push_str("\n# config\n");
        for line in cfg_text.lines() {
            let _ = writeln!(manifest, "# {line}");
        }
        let path = dir.join(MANIFEST_NAME);
        fs::write(&path, manifest).map_err(|source| JobError::Io {
            context: format!("writing {}", path.display()),
            source,
        })?;
        Ok(entries)
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

fn setup(cfg: &JobConfig) -> Result<(GCluster, Embedding), JobError> {
    let c = build_cluster(&cfg.cluster).map_err(pipeline("cluster"))?;
    let e = embed(&c).map_err(pipeline("superspace"))?;
    Ok((c, e))
}

fn diffraction_outputs(
    out: &mut Outputs,
    points: &[Vec2],
    d: &DiffractionSection,
    artifacts: &[Artifact],
    stem: &str,
    summary: &mut Vec<String>,
) -> Result<(), JobError> {
    let want_pgm = artifacts.contains(&Artifact::Pgm);
    let want_peaks = artifacts.contains(&Artifact::Peaks);
    if !want_pgm && !want_peaks {
        return Ok(());
    }
    let map: DiffractionMap = intensity_map(points, d.qmax, d.res).map_err(pipeline("diffraction"))?;
    if want_pgm {
        out.add(&format!("{stem}.pgm"), |w| write_pgm(w, &map, d.gamma));
    }
    if want_peaks {
        let peaks = peak_list(&map, d.threshold);
        summary.push(format!("peaks: {}", peaks.len()));
        out.add("peaks.csv", |w| write_peaks_csv(w, &peaks));
    }
    Ok(())
}

/// Runs one job. Artifacts depend only on `cfg`, never on thread count.
pub fn run_job(cfg: &JobConfig, opts: &RunOptions) -> Result<RunReport, JobError> {
    let mut cfg = cfg.clone();
    if let Some(dir) = &opts.out {
        cfg.output.dir = dir.clone();
    }
    let (c, e) = setup(&cfg)?;
    let mut out = Outputs { files: Vec::new() };
    let mut summary = Vec::new();
    let arts = &cfg.output.artifacts;
    let style = SvgStyle { point_radius: cfg.output.point_radius, ..SvgStyle::default() };

    match cfg.mode {
        Mode::Pattern => {
            let s = cfg.strip.as_ref().expect("validated config");
            let scfg = StripConfig { t: s.t.clone(), tol: s.tol, region: s.region, budget: s.budget };
            let p = enumerate_pattern(&e, &scfg).map_err(pipeline("strip"))?;
            summary.push(format!("pattern points: {}", p.len()));
            if arts.contains(&Artifact::Csv) {
                out.add("pattern.csv", |w| write_pattern_csv(w, &p));
            }
            if arts.contains(&Artifact::Svg) {
                let occ = interior_occupations(&p, &c, c.max_radius());
                let rings: Vec<Vec2> = occ
                    .iter()
                    .filter(|&&(_, o)| o >= s.ring_threshold)
                    .map(|&(i, _)| p.points[i].pos)
                    .collect();
                let full = occ.iter().filter(|&&(_, o)| o == 1.0).count();
                summary.push(format!("interior centres: {}, fully occupied: {full}", occ.len()));
                let pts: Vec<Vec2> = p.positions().collect();
                out.add("pattern.svg", |w| write_svg(w, &pts, &rings, Some(s.region), &style));
            }
            let pts: Vec<Vec2> = p.positions().collect();
            diffraction_outputs(&mut out, &pts, &cfg.diffraction, arts, "pattern", &mut summary)?;
        }
        Mode::Pack => {
            let s = cfg.packing.as_ref().expect("validated config");
            let pcfg = PackingConfig {
                t: s.t.clone(),
                radius: s.radius,
                delta: s.delta,
                delta_slack: s.delta_slack,
                cluster: c.clone(),
                budget: s.budget,
            };
            let cands = candidate_list(&e, &pcfg).map_err(pipeline("packing"))?;
            let q = greedy_pack_candidates(&e, &pcfg, &cands);
            let seeds = q.seeds().count();
            summary.push(format!("candidates: {}, packed points: {}, seeds: {seeds}", cands.len(), q.len()));
            if q.len() >= 2 {
                let m = packing::min_pairwise_distance(&q).map_err(pipeline("packing"))?;
                summary.push(format!("min distance: {m:.12} (delta {:.12})", s.delta));
                if m < s.delta - s.delta_slack {
                    return Err(JobError::Invariant(format!(
                        "packing min distance {m} below delta {} - slack {}",
                        s.delta, s.delta_slack
                    )));
                }
            }
            if arts.contains(&Artifact::Csv) {
                out.add("packing.csv", |w| write_packing_csv(w, &q));
            }
            if arts.contains(&Artifact::Svg) {
                let rings: Vec<Vec2> = q.seeds().map(|(_, p)| p.pos).collect();
                out.add("packing.svg", |w| write_svg(w, &q.positions(), &rings, None, &style));
            }
            diffraction_outputs(&mut out, &q.positions(), &cfg.diffraction, arts, "packing", &mut summary)?;
            if opts.seed_report {
                out.add("candidates.csv", |w| {
                    writeln!(w, "rank,d,outcome,lift")?;
                    for (i, (cand, o)) in cands.iter().zip(&q.outcomes).enumerate() {
                        let o = match o {
                            Outcome::Seed => "seed",
                            Outcome::TooClose => "too_close",
                            Outcome::Duplicate => "duplicate",
                        };
                        let lift: Vec<String> = cand.lift.iter().map(|v| v.to_string()).collect();
                        writeln!(w, "{i},{:.12},{o},{}", cand.d, lift.join(" "))?;
                    }
                    Ok(())
                });
            }
        }
        Mode::Spectrum => {
            let s = cfg.spectrum.as_ref().expect("validated config");
            let region = match s.region {
                SpectrumRegion::Halfwidth(m) => SearchRegion::Cube(m),
                SpectrumRegion::Radius(r) => SearchRegion::Ball(r),
            };
            let values = distance_spectrum_in(&e, &s.t, region, s.count, s.budget).map_err(pipeline("strip"))?;
            summary.push(format!("distances: {}", values.len()));
            out.add("spectrum.csv", |w| write_spectrum_csv(w, &values));
        }
    }

    let dir = cfg.output.dir.clone();
    let entries = out.flush(&dir, &render_config(&cfg))?;
    Ok(RunReport { dir, entries, summary })
}

/// Points and optional seed flags from a CSV with `x` and `y` columns.
/// A `kind` column marks rows equal to `seed`.
pub fn read_points_csv(path: &Path) -> Result<(Vec<Vec2>, Vec<bool>), JobError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| JobError::Input(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| JobError::Input(format!("{}: {e}", path.display())))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(ix), Some(iy)) = (col("x"), col("y")) else {
        return Err(JobError::Input(format!("{}: expected `x` and `y` columns", path.display())));
    };
    let kind = col("kind");
    let mut pts = Vec::new();
    let mut seeds = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| JobError::Input(format!("{}: {e}", path.display())))?;
        let num = |i: usize| -> Result<f64, JobError> {
            rec.get(i).and_then(|s| s.trim().parse().ok()).ok_or_else(|| {
                JobError::Input(format!("{}: row {}: bad number in column {}", path.display(), row + 2, i))
            })
        };
        pts.push(Vec2::new(num(ix)?, num(iy)?));
        seeds.push(kind.and_then(|k| rec.get(k)).is_some_and(|s| s.trim() == "seed"));
    }
    Ok((pts, seeds))
}

/// Diffraction of an external point list: `<stem>.pgm` and `peaks.csv`.
pub fn run_diffract(input: &Path, d: &DiffractionSection, dir: &Path) -> Result<RunReport, JobError> {
    let (pts, _) = read_points_csv(input)?;
    let mut out = Outputs { files: Vec::new() };
    let mut summary = vec![format!("points: {}", pts.len())];
    diffraction_outputs(&mut out, &pts, d, &[Artifact::Pgm, Artifact::Peaks], "diffraction", &mut summary)?;
    let note = format!("diffract input = {}\nqmax = {}\nres = {}\nthreshold = {}\ngamma = {}\n",
        input.display(), d.qmax, d.res, d.threshold, d.gamma);
    let entries = out.flush(dir, &note)?;
    Ok(RunReport { dir: dir.to_path_buf(), entries, summary })
}

/// SVG scatter of an external point list, rings at seeds.
pub fn run_render(input: &Path, point_radius: f64, dir: &Path) -> Result<RunReport, JobError> {
    let (pts, seeds) = read_points_csv(input)?;
    let rings: Vec<Vec2> = pts.iter().zip(&seeds).filter(|(_, &s)| s).map(|(p, _)| *p).collect();
    let style = SvgStyle { point_radius, ..SvgStyle::default() };
    let mut out = Outputs { files: Vec::new() };
    out.add("render.svg", |w| write_svg(w, &pts, &rings, None, &style));
    let summary = vec![format!("points: {}, rings: {}", pts.len(), rings.len())];
    let note = format!("render input = {}\npoint_radius = {point_radius}\n", input.display());
    let entries = out.flush(dir, &note)?;
    Ok(RunReport { dir: dir.to_path_buf(), entries, summary })
}

/// Distance spectra of the single-shell C8, C10 and C12 clusters at `t = 0`.
pub fn table1(region: SearchRegion, count: usize, budget: u64) -> Result<Vec<(u32, Vec<f64>)>, JobError> {
    [8u32, 10, 12]
        .into_iter()
        .map(|n| {
            let c = build_cluster(&quasiproj::ClusterSpec::single(n, 1.0, 0.0)).map_err(pipeline("cluster"))?;
            let e = embed(&c).map_err(pipeline("superspace"))?;
            let v = distance_spectrum_in(&e, &vec![0.0; e.k()], region, count, budget).map_err(pipeline("strip"))?;
            Ok((n, v))
        })
        .collect()
}

/// Table with one column per cluster, values to 4 decimals.
pub fn format_table1(cols: &[(u32, Vec<f64>)]) -> String {
    let mut s = String::from("order");
    for (n, _) in cols {
        let _ = write!(s, "\tC{n}");
    }
    s.push('\n');
    let rows = cols.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    for r in 0..rows {
        let _ = write!(s, "{r}");
        for (_, v) in cols {
            match v.get(r) {
                Some(x) => {
                    let _ = write!(s, "\t{x:.4}");
                }
                None => s.push_str("\t-"),
            }
        }
        s.push('\n');
    }
    s
}
