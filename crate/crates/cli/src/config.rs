//! Job configuration: flat `key = value` lines grouped under `[section]` headers.
//!
//! ```text
//! mode = pack
//!
//! [cluster]
//! n = 12
//! seeds = (1, 0)
//!
//! [packing]
//! radius = 3.5
//! delta = auto
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use quasiproj::cluster::min_intersite_distance;
use quasiproj::diffraction::{DEFAULT_QMAX, DEFAULT_RES};
use quasiproj::geom::Rect;
use quasiproj::packing::DEFAULT_DELTA_SLACK;
use quasiproj::strip::DEFAULT_TOL;
use quasiproj::{build_cluster, ClusterSpec, Vec2, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Validation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub kind: ErrorKind,
    pub line: Option<usize>,
    /// `section.key`, or the bare key for top-level entries.
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Parse => "ParseError",
            ErrorKind::Validation => "ValidationError",
        };
        match self.line {
            Some(l) => write!(f, "{kind}: line {l}: {}: {}", self.key, self.message),
            None => write!(f, "{kind}: {}: {}", self.key, self.message),
        }
    }
}

/// All errors found in one config, in line order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Pattern,
    Pack,
    Spectrum,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Pattern => "pattern",
            Mode::Pack => "pack",
            Mode::Spectrum => "spectrum",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripSection {
    pub t: Vec<f64>,
    pub tol: f64,
    pub region: Rect,
    pub budget: u64,
    /// Occupation at or above which a pattern point gets a ring in the SVG.
    pub ring_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSpec {
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackingSection {
    pub t: Vec<f64>,
    pub radius: f64,
    pub delta_spec: DeltaSpec,
    /// δ after resolving `auto` to the cluster's nearest-neighbour distance.
    pub delta: f64,
    pub delta_slack: f64,
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumRegion {
    Halfwidth(i64),
    Radius(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSection {
    pub t: Vec<f64>,
    pub region: SpectrumRegion,
    pub count: usize,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionSection {
    pub qmax: f64,
    pub res: usize,
    pub threshold: f64,
    pub gamma: f64,
}

impl Default for DiffractionSection {
    fn default() -> Self {
        DiffractionSection { qmax: DEFAULT_QMAX, res: DEFAULT_RES, threshold: 0.05, gamma: 0.25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Artifact {
    Csv,
    Svg,
    Pgm,
    Peaks,
}

impl Artifact {
    pub fn as_str(self) -> &'static str {
        match self {
            Artifact::Csv => "csv",
            Artifact::Svg => "svg",
            Artifact::Pgm => "pgm",
            Artifact::Peaks => "peaks",
        }
    }

    fn parse(s: &str) -> Option<Artifact> {
        Some(match s {
            "csv" => Artifact::Csv,
            "svg" => Artifact::Svg,
            "pgm" => Artifact::Pgm,
            "peaks" => Artifact::Peaks,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub artifacts: Vec<Artifact>,
    pub point_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub mode: Mode,
    pub cluster: ClusterSpec,
    pub strip: Option<StripSection>,
    pub packing: Option<PackingSection>,
    pub spectrum: Option<SpectrumSection>,
    pub diffraction: DiffractionSection,
    pub output: OutputSection,
}

pub fn default_artifacts(mode: Mode) -> Vec<Artifact> {
    match mode {
        Mode::Pattern => vec![Artifact::Csv, Artifact::Svg],
        Mode::Pack => vec![Artifact::Csv, Artifact::Svg, Artifact::Pgm],
        Mode::Spectrum => vec![Artifact::Csv],
    }
}

const SECTIONS: [&str; 6] = ["cluster", "strip", "packing", "spectrum", "diffraction", "output"];

fn known_keys(section: &str) -> &'static [&'static str] {
    match section {
        "" => &["mode"],
        "cluster" => &["n", "seeds", "reflection"],
        "strip" => &["t", "tol", "region", "budget", "ring_threshold"],
        "packing" => &["t", "radius", "delta", "delta_slack", "budget"],
        "spectrum" => &["t", "halfwidth", "radius", "count", "budget"],
        "diffraction" => &["qmax", "res", "threshold", "gamma"],
        "output" => &["dir", "artifacts", "point_radius"],
        _ => &[],
    }
}

#[derive(Debug)]
struct Entry {
    line: usize,
    value: String,
}

/// Raw `section -> key -> entry` table.
#[derive(Debug, Default)]
struct Raw {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

fn lex(text: &str, errors: &mut Vec<ConfigError>) -> Raw {
    let mut raw = Raw::default();
    raw.sections.insert(String::new(), BTreeMap::new());
    let mut current = String::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                errors.push(parse_err(lineno, line, "unterminated section header"));
                continue;
            };
            let name = name.trim().to_string();
            if !SECTIONS.contains(&name.as_str()) {
                errors.push(parse_err(lineno, &name, "unknown section"));
            } else if raw.sections.contains_key(&name) {
                errors.push(parse_err(lineno, &name, "duplicate section"));
            } else {
                raw.sections.insert(name.clone(), BTreeMap::new());
            }
            current = name;
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(parse_err(lineno, line, "expected `key = value`"));
            continue;
        };
        let key = key.trim().to_string();
        let path = key_path(&current, &key);
        if !SECTIONS.contains(&current.as_str()) && !current.is_empty() {
            continue;
        }
        if !known_keys(&current).contains(&key.as_str()) {
            errors.push(parse_err(lineno, &path, "unknown key"));
            continue;
        }
        let table = raw.sections.get_mut(&current).expect("section registered");
        if table.contains_key(&key) {
            errors.push(parse_err(lineno, &path, "duplicate key"));
            continue;
        }
        table.insert(key, Entry { line: lineno, value: value.trim().to_string() });
    }
    raw
}

fn key_path(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

fn parse_err(line: usize, key: &str, msg: &str) -> ConfigError {
    ConfigError { kind: ErrorKind::Parse, line: Some(line), key: key.to_string(), message: msg.to_string() }
}

/// Typed access to one section, recording errors instead of failing fast.
struct Section<'a> {
    name: &'a str,
    entries: Option<&'a BTreeMap<String, Entry>>,
    errors: &'a mut Vec<ConfigError>,
}

impl<'a> Section<'a> {
    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.entries.and_then(|e| e.get(key))
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entry(key).map(|e| e.line)
    }

    fn has(&self, key: &str) -> bool {
        self.entry(key).is_some()
    }

    fn parse_error(&mut self, key: &str, msg: impl Into<String>) {
        let line = self.line(key);
        self.errors.push(ConfigError {
            kind: ErrorKind::Parse,
            line,
            key: key_path(self.name, key),
            message: msg.into(),
        });
    }

    fn invalid(&mut self, key: &str, msg: impl Into<String>) {
        let line = self.line(key);
        self.errors.push(ConfigError {
            kind: ErrorKind::Validation,
            line,
            key: key_path(self.name, key),
            message: msg.into(),
        });
    }

    fn get<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Option<T> {
        let e = self.entry(key)?;
        match e.value.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                let msg = format!("expected {what}, got `{}`", e.value);
                self.parse_error(key, msg);
                None
            }
        }
    }

    fn f64_or(&mut self, key: &str, default: f64) -> f64 {
        self.get::<f64>(key, "a number").unwrap_or(default)
    }

    fn floats(&mut self, key: &str) -> Option<Vec<f64>> {
        let e = self.entry(key)?;
        let parsed: Result<Vec<f64>, _> = e
            .value
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect();
        match parsed {
            Ok(v) => Some(v),
            Err(_) => {
                let msg = format!("expected a comma-separated list of numbers, got `{}`", e.value);
                self.parse_error(key, msg);
                None
            }
        }
    }

    fn pairs(&mut self, key: &str) -> Option<Vec<Vec2>> {
        let e = self.entry(key)?;
        match parse_pairs(&e.value) {
            Some(v) => Some(v),
            None => {
                let msg = format!("expected pairs like `(1, 0), (1.1, 1.3)`, got `{}`", e.value);
                self.parse_error(key, msg);
                None
            }
        }
    }

    /// Translation vector of length `k`, zeros when absent.
    fn translation(&mut self, k: Option<usize>) -> Vec<f64> {
        let k = k.unwrap_or(0);
        match self.floats("t") {
            Some(t) => {
                if k > 0 && t.len() != k {
                    self.invalid("t", format!("expected {k} components, got {}", t.len()));
                }
                t
            }
            None => vec![0.0; k],
        }
    }
}

fn parse_pairs(s: &str) -> Option<Vec<Vec2>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        rest = rest.strip_prefix('(')?;
        let close = rest.find(')')?;
        let (inner, tail) = rest.split_at(close);
        let (x, y) = inner.split_once(',')?;
        out.push(Vec2::new(x.trim().parse().ok()?, y.trim().parse().ok()?));
        rest = tail[1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return None;
            }
        } else if !rest.is_empty() {
            return None;
        }
    }
    (!out.is_empty()).then_some(out)
}

/// Parses and validates a config; reports every problem found.
pub fn parse_config(text: &str) -> Result<JobConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let raw = lex(text, &mut errors);
    let section = |name: &'static str| raw.sections.get(name);

    let mut top = Section { name: "", entries: section(""), errors: &mut errors };
    let mode = match top.entry("mode").map(|e| e.value.as_str()) {
        Some("pattern") => Some(Mode::Pattern),
        Some("pack") => Some(Mode::Pack),
        Some("spectrum") => Some(Mode::Spectrum),
        Some(other) => {
            let msg = format!("expected one of pattern, pack, spectrum; got `{other}`");
            top.invalid("mode", msg);
            None
        }
        None => {
            top.invalid("mode", "missing");
            None
        }
    };

    // cluster
    let mut cs = Section { name: "cluster", entries: section("cluster"), errors: &mut errors };
    let n = cs.get::<u32>("n", "a positive integer");
    if cs.entries.is_none() || (!cs.has("n") && !cs.has("seeds")) {
        cs.invalid("n", "a [cluster] section with `n` and `seeds` is required");
    } else if !cs.has("n") {
        cs.invalid("n", "missing");
    }
    let seeds = cs.pairs("seeds");
    if cs.entries.is_some() && !cs.has("seeds") {
        cs.invalid("seeds", "missing");
    }
    let reflection = cs.get::<bool>("reflection", "true or false").unwrap_or(false);
    let mut cluster = None;
    if let (Some(n), Some(seeds)) = (n, seeds) {
        let spec = ClusterSpec::new(n, seeds).with_reflection(reflection);
        if n % 2 != 0 {
            cs.invalid("n", "n must be even");
        } else if n < 4 {
            cs.invalid("n", "n must be at least 4");
        } else {
            match build_cluster(&spec) {
                Ok(c) => cluster = Some((spec, c)),
                Err(e) => cs.invalid("seeds", e.to_string()),
            }
        }
    }
    let k = cluster.as_ref().map(|(_, c)| c.k());

    // strip
    let strip = section("strip").map(|entries| {
        let mut s = Section { name: "strip", entries: Some(entries), errors: &mut errors };
        let t = s.translation(k);
        let tol = s.f64_or("tol", DEFAULT_TOL);
        if !(tol >= 0.0) {
            s.invalid("tol", "must be >= 0");
        }
        let region = match s.floats("region") {
            Some(v) if v.len() == 4 => {
                let r = Rect::new(v[0], v[1], v[2], v[3]);
                if !r.has_positive_area() {
                    s.invalid("region", "expected xmin < xmax and ymin < ymax");
                }
                r
            }
            Some(_) => {
                s.invalid("region", "expected `xmin, xmax, ymin, ymax`");
                Rect::centered(1.0)
            }
            None => {
                if !s.has("region") {
                    s.invalid("region", "missing");
                }
                Rect::centered(1.0)
            }
        };
        let budget = s.get::<u64>("budget", "a non-negative integer").unwrap_or(DEFAULT_BUDGET);
        let ring_threshold = s.f64_or("ring_threshold", 1.0);
        if !(0.0..=1.0).contains(&ring_threshold) {
            s.invalid("ring_threshold", "must lie in [0, 1]");
        }
        StripSection { t, tol, region, budget, ring_threshold }
    });

    // packing
    let packing = section("packing").map(|entries| {
        let mut s = Section { name: "packing", entries: Some(entries), errors: &mut errors };
        let t = s.translation(k);
        let radius = s.get::<f64>("radius", "a number");
        match radius {
            None if !s.has("radius") => s.invalid("radius", "missing"),
            Some(r) if !(r > 0.0 && r.is_finite()) => s.invalid("radius", "R must be positive"),
            _ => {}
        }
        let delta_spec = match s.entry("delta").map(|e| e.value.clone()) {
            None => DeltaSpec::Auto,
            Some(v) if v == "auto" => DeltaSpec::Auto,
            Some(_) => match s.get::<f64>("delta", "a number or `auto`") {
                Some(d) => {
                    if !(d > 0.0 && d.is_finite()) {
                        s.invalid("delta", "delta must be positive");
                    }
                    DeltaSpec::Value(d)
                }
                None => DeltaSpec::Auto,
            },
        };
        let delta = match (delta_spec, &cluster) {
            (DeltaSpec::Value(d), _) => d,
            (DeltaSpec::Auto, Some((_, c))) => min_intersite_distance(c),
            (DeltaSpec::Auto, None) => f64::NAN,
        };
        let delta_slack = s.f64_or("delta_slack", DEFAULT_DELTA_SLACK);
        if !(delta_slack >= 0.0) {
            s.invalid("delta_slack", "must be >= 0");
        }
        let budget = s.get::<u64>("budget", "a non-negative integer").unwrap_or(DEFAULT_BUDGET);
        PackingSection { t, radius: radius.unwrap_or(f64::NAN), delta_spec, delta, delta_slack, budget }
    });

    // spectrum
    let spectrum = section("spectrum").map(|entries| {
        let mut s = Section { name: "spectrum", entries: Some(entries), errors: &mut errors };
        let t = s.translation(k);
        let region = match (s.has("halfwidth"), s.has("radius")) {
            (true, true) => {
                s.invalid("radius", "give either halfwidth or radius, not both");
                SpectrumRegion::Halfwidth(3)
            }
            (false, true) => {
                let r = s.f64_or("radius", 1.0);
                if !(r > 0.0 && r.is_finite()) {
                    s.invalid("radius", "must be positive");
                }
                SpectrumRegion::Radius(r)
            }
            _ => {
                let m = s.get::<i64>("halfwidth", "an integer").unwrap_or(3);
                if m < 1 {
                    s.invalid("halfwidth", "must be >= 1");
                }
                SpectrumRegion::Halfwidth(m)
            }
        };
        let count = s.get::<usize>("count", "a positive integer").unwrap_or(11);
        if count == 0 {
            s.invalid("count", "must be >= 1");
        }
        let budget = s.get::<u64>("budget", "a non-negative integer").unwrap_or(DEFAULT_BUDGET);
        SpectrumSection { t, region, count, budget }
    });

    // diffraction
    let diffraction = {
        let mut s = Section { name: "diffraction", entries: section("diffraction"), errors: &mut errors };
        let d = DiffractionSection::default();
        let qmax = s.f64_or("qmax", d.qmax);
        if !(qmax > 0.0 && qmax.is_finite()) {
            s.invalid("qmax", "must be positive");
        }
        let res = s.get::<usize>("res", "a positive integer").unwrap_or(d.res);
        if res < 3 || res.is_multiple_of(2) {
            s.invalid("res", "must be odd and >= 3");
        }
        let threshold = s.f64_or("threshold", d.threshold);
        if !(threshold > 0.0 && threshold <= 1.0) {
            s.invalid("threshold", "must lie in (0, 1]");
        }
        let gamma = s.f64_or("gamma", d.gamma);
        if !(gamma > 0.0 && gamma.is_finite()) {
            s.invalid("gamma", "must be positive");
        }
        DiffractionSection { qmax, res, threshold, gamma }
    };

    // output
    let output = {
        let mut s = Section { name: "output", entries: section("output"), errors: &mut errors };
        let dir = s.entry("dir").map_or_else(|| PathBuf::from("out"), |e| PathBuf::from(&e.value));
        let artifacts = match s.entry("artifacts").map(|e| e.value.clone()) {
            Some(v) => {
                let mut list = Vec::new();
                for item in v.split(',').map(str::trim) {
                    match Artifact::parse(item) {
                        Some(a) if !list.contains(&a) => list.push(a),
                        Some(_) => {}
                        None => s.parse_error("artifacts", format!("unknown artifact `{item}`")),
                    }
                }
                list.sort();
                list
            }
            None => mode.map(default_artifacts).unwrap_or_default(),
        };
        let point_radius = s.f64_or("point_radius", 0.08);
        if !(point_radius > 0.0) {
            s.invalid("point_radius", "must be positive");
        }
        OutputSection { dir, artifacts, point_radius }
    };

    if let Some(mode) = mode {
        let required = match mode {
            Mode::Pattern => ("strip", strip.is_some()),
            Mode::Pack => ("packing", packing.is_some()),
            Mode::Spectrum => ("spectrum", spectrum.is_some()),
        };
        if !required.1 {
            errors.push(ConfigError {
                kind: ErrorKind::Validation,
                line: None,
                key: required.0.to_string(),
                message: format!("mode `{}` requires a [{}] section", mode.as_str(), required.0),
            });
        }
    }

    if !errors.is_empty() {
        errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        return Err(ConfigErrors(errors));
    }
    let (cluster, _) = cluster.expect("validated above");
    Ok(JobConfig {
        mode: mode.expect("validated above"),
        cluster,
        strip,
        packing,
        spectrum,
        diffraction,
        output,
    })
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

/// Renders a config that [`parse_config`] reads back to an equal value.
pub fn render_config(cfg: &JobConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mode = {}", cfg.mode.as_str());
    let _ = writeln!(s, "\n[cluster]");
    let _ = writeln!(s, "n = {}", cfg.cluster.n);
    let seeds: Vec<String> = cfg.cluster.seeds.iter().map(|p| format!("({}, {})", p.x, p.y)).collect();
    let _ = writeln!(s, "seeds = {}", seeds.join(", "));
    let _ = writeln!(s, "reflection = {}", cfg.cluster.use_reflection);
    if let Some(st) = &cfg.strip {
        let r = st.region;
        let _ = writeln!(s, "\n[strip]");
        let _ = writeln!(s, "t = {}", join(&st.t));
        let _ = writeln!(s, "tol = {}", st.tol);
        let _ = writeln!(s, "region = {}", join(&[r.xmin, r.xmax, r.ymin, r.ymax]));
        let _ = writeln!(s, "budget = {}", st.budget);
        let _ = writeln!(s, "ring_threshold = {}", st.ring_threshold);
    }
    if let Some(p) = &cfg.packing {
        let _ = writeln!(s, "\n[packing]");
        let _ = writeln!(s, "t = {}", join(&p.t));
        let _ = writeln!(s, "radius = {}", p.radius);
        match p.delta_spec {
            DeltaSpec::Auto => {
                let _ = writeln!(s, "delta = auto");
            }
            DeltaSpec::Value(d) => {
                let _ = writeln!(s, "delta = {d}");
            }
        }
        let _ = writeln!(s, "delta_slack = {}", p.delta_slack);
        let _ = writeln!(s, "budget = {}", p.budget);
    }
    if let Some(sp) = &cfg.spectrum {
        let _ = writeln!(s, "\n[spectrum]");
        let _ = writeln!(s, "t = {}", join(&sp.t));
        match sp.region {
            SpectrumRegion::Halfwidth(m) => {
                let _ = writeln!(s, "halfwidth = {m}");
            }
            SpectrumRegion::Radius(r) => {
                let _ = writeln!(s, "radius = {r}");
            }
        }
        let _ = writeln!(s, "count = {}", sp.count);
        let _ = writeln!(s, "budget = {}", sp.budget);
    }
    let d = &cfg.diffraction;
    let _ = writeln!(s, "\n[diffraction]");
    let _ = writeln!(s, "qmax = {}", d.qmax);
    let _ = writeln!(s, "res = {}", d.res);
    let _ = writeln!(s, "threshold = {}", d.threshold);
    let _ = writeln!(s, "gamma = {}", d.gamma);
    let o = &cfg.output;
    let _ = writeln!(s, "\n[output]");
    let _ = writeln!(s, "dir = {}", o.dir.display());
    let arts: Vec<&str> = o.artifacts.iter().map(|a| a.as_str()).collect();
    let _ = writeln!(s, "artifacts = {}", arts.join(", "));
    let _ = writeln!(s, "point_radius = {}", o.point_radius);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_C8: &str = "mode = pattern\n[cluster]\nn = 8\nseeds = (1, 0)\n[strip]\nregion = -5, 5, -5, 5\n";

    #[test]
    fn minimal_pattern_config_gets_defaults() {
        let cfg = parse_config(MINIMAL_C8).unwrap();
        assert_eq!(cfg.mode, Mode::Pattern);
        let st = cfg.strip.unwrap();
        assert_eq!(st.t, vec![0.0; 4]);
        assert_eq!(st.tol, 1e-9);
        assert_eq!(st.region, Rect::centered(5.0));
        assert_eq!(cfg.output.artifacts, vec![Artifact::Csv, Artifact::Svg]);
        assert_eq!(cfg.diffraction, DiffractionSection::default());
    }

    #[test]
    fn odd_n_is_a_validation_error() {
        let errs = parse_config(&MINIMAL_C8.replace("n = 8", "n = 7")).unwrap_err();
        assert_eq!(errs.0.len(), 1);
        let e = &errs.0[0];
        assert_eq!(e.kind, ErrorKind::Validation);
        assert_eq!(e.key, "cluster.n");
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("n must be even"));
    }

    #[test]
    fn auto_delta_resolves_to_nearest_neighbour_distance() {
        let text = "mode = pack\n[cluster]\nn = 12\nseeds = (1, 0)\n[packing]\nradius = 2\ndelta = auto\n";
        let cfg = parse_config(text).unwrap();
        let p = cfg.packing.unwrap();
        assert_eq!(p.delta_spec, DeltaSpec::Auto);
        assert!((p.delta - 2.0 * (std::f64::consts::PI / 12.0).sin()).abs() < 1e-12);
        assert_eq!(cfg.output.artifacts, vec![Artifact::Csv, Artifact::Svg, Artifact::Pgm]);
    }

    #[test]
    fn malformed_lines_report_line_and_key() {
        let text = "mode = pattern\n[cluster]\nn = eight\nseeds = (1, 0\nbogus\n[strip]\nregion = 1, 2\ncolour = red\n";
        let errs = parse_config(text).unwrap_err().0;
        let keys: Vec<(&str, Option<usize>, ErrorKind)> =
            errs.iter().map(|e| (e.key.as_str(), e.line, e.kind)).collect();
        assert!(keys.contains(&("cluster.n", Some(3), ErrorKind::Parse)));
        assert!(keys.contains(&("cluster.seeds", Some(4), ErrorKind::Parse)));
        assert!(keys.contains(&("bogus", Some(5), ErrorKind::Parse)));
        assert!(keys.contains(&("strip.region", Some(7), ErrorKind::Validation)));
        assert!(keys.contains(&("strip.colour", Some(8), ErrorKind::Parse)));
    }

    #[test]
    fn negative_delta_and_missing_sections() {
        let text = "mode = pack\n[cluster]\nn = 8\nseeds = (1, 0)\n[packing]\nradius = 2\ndelta = -0.5\n";
        let errs = parse_config(text).unwrap_err().0;
        assert_eq!(errs[0].key, "packing.delta");
        assert_eq!(errs[0].kind, ErrorKind::Validation);

        let errs = parse_config("mode = spectrum\n[cluster]\nn = 8\nseeds = (1, 0)\n").unwrap_err().0;
        assert_eq!(errs[0].key, "spectrum");
    }

    #[test]
    fn pairs_syntax() {
        assert_eq!(
            parse_pairs("(1, 0), (1.1, 1.3)"),
            Some(vec![Vec2::new(1.0, 0.0), Vec2::new(1.1, 1.3)])
        );
        assert_eq!(parse_pairs("(1,0)"), Some(vec![Vec2::new(1.0, 0.0)]));
        assert_eq!(parse_pairs("(1, 0),"), None);
        assert_eq!(parse_pairs("1, 0"), None);
        assert_eq!(parse_pairs(""), None);
    }

    #[test]
    fn render_round_trips() {
        let text = "mode = spectrum\n[cluster]\nn = 10\nseeds = (1, 0), (1.1, 1.3)\nreflection = true\n\
                    [spectrum]\nradius = 7\ncount = 5\n[output]\ndir = results/x\nartifacts = csv, peaks\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(parse_config(&render_config(&cfg)).unwrap(), cfg);
    }
}
