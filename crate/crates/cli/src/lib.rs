//! Config-driven batch front-end for the `quasiproj` library.

pub mod config;
pub mod run;

pub use config::{parse_config, render_config, ConfigError, ConfigErrors, JobConfig, Mode};
pub use run::{run_job, JobError, ManifestEntry, RunOptions, RunReport};
