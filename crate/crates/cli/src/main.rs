use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quasiproj::strip::SearchRegion;
use quasiproj::DEFAULT_BUDGET;
use quasiproj_cli::config::{DiffractionSection, Mode};
use quasiproj_cli::run::{self, format_table1};
use quasiproj_cli::{parse_config, run_job, JobError, RunOptions, RunReport};

/// Cut-and-project patterns, greedy cluster packings and their diffraction.
#[derive(Debug, Parser)]
#[command(name = "quasiproj", version)]
struct Cli {
    /// Job config; runs its `mode` when no subcommand is given.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `[output] dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads: a number or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    threads: String,
    /// Write candidates.csv with the greedy candidate ordering.
    #[arg(long, global = true)]
    seed_report: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smallest distances from Z^k to E for C8, C10 and C12.
    Table1 {
        /// Scan the cube {-m..m}^k.
        #[arg(long, default_value_t = 3, conflicts_with = "radius")]
        halfwidth: i64,
        /// Scan the ball ||x|| < R instead of a cube.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 11)]
        count: usize,
    },
    /// Run a config whose mode is `pattern`.
    Pattern,
    /// Run a config whose mode is `pack`.
    Pack,
    /// Diffraction image and peak list of a point CSV.
    Diffract {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        qmax: Option<f64>,
        #[arg(long)]
        res: Option<usize>,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// SVG scatter plot of a point CSV.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.08)]
        point_radius: f64,
    },
}

fn threads(spec: &str) -> Result<usize, String> {
    if spec == "auto" {
        return Ok(0);
    }
    match spec.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("--threads expects a positive integer or `auto`, got `{spec}`")),
    }
}

fn read_config(path: Option<&Path>, expect: Option<Mode>) -> Result<quasiproj_cli::JobConfig, (i32, String)> {
    let path = path.ok_or((2, "--config is required".to_string()))?;
    let text = std::fs::read_to_string(path).map_err(|e| (1, format!("{}: {e}", path.display())))?;
    let cfg = parse_config(&text).map_err(|e| (2, e.to_string()))?;
    if let Some(m) = expect {
        if cfg.mode != m {
            return Err((2, format!("ValidationError: mode: config mode is `{}`, expected `{}`", cfg.mode.as_str(), m.as_str())));
        }
    }
    Ok(cfg)
}

fn report(r: &RunReport) {
    for line in &r.summary {
        eprintln!("{line}");
    }
    for e in &r.entries {
        eprintln!("wrote {} ({} bytes)", r.dir.join(&e.name).display(), e.bytes);
    }
}

fn job_failed(e: JobError) -> (i32, String) {
    (e.exit_code(), e.to_string())
}

fn run(cli: Cli) -> Result<(), (i32, String)> {
    let n = threads(&cli.threads).map_err(|m| (2, m))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| (1, e.to_string()))?;
    let out_dir = |default: &str| cli.out.clone().unwrap_or_else(|| PathBuf::from(default));
    let opts = RunOptions { out: cli.out.clone(), seed_report: cli.seed_report };

    match cli.command {
        None => {
            let cfg = read_config(cli.config.as_deref(), None)?;
            report(&run_job(&cfg, &opts).map_err(job_failed)?);
        }
        Some(Command::Pattern) => {
            let cfg = read_config(cli.config.as_deref(), Some(Mode::Pattern))?;
            report(&run_job(&cfg, &opts).map_err(job_failed)?);
        }
        Some(Command::Pack) => {
            let cfg = read_config(cli.config.as_deref(), Some(Mode::Pack))?;
            report(&run_job(&cfg, &opts).map_err(job_failed)?);
        }
        Some(Command::Table1 { halfwidth, radius, count }) => {
            let region = radius.map_or(SearchRegion::Cube(halfwidth), SearchRegion::Ball);
            let cols = run::table1(region, count, DEFAULT_BUDGET).map_err(job_failed)?;
            print!("{}", format_table1(&cols));
        }
        Some(Command::Diffract { input, qmax, res, threshold, gamma }) => {
            let d0 = DiffractionSection::default();
            let d = DiffractionSection {
                qmax: qmax.unwrap_or(d0.qmax),
                res: res.unwrap_or(d0.res),
                threshold: threshold.unwrap_or(d0.threshold),
                gamma: gamma.unwrap_or(d0.gamma),
            };
            report(&run::run_diffract(&input, &d, &out_dir("out")).map_err(job_failed)?);
        }
        Some(Command::Render { input, point_radius }) => {
            report(&run::run_render(&input, point_radius, &out_dir("out")).map_err(job_failed)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
