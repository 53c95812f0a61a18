//! Planar quasiperiodic point sets from strip projection of `Z^k`, and
//! aperiodic cluster packings built by a greedy variant of the same method.
//!
//! Pipeline: [`cluster::build_cluster`] → [`superspace::embed`] →
//! [`strip::enumerate_pattern`] or [`packing::greedy_pack`] →
//! [`diffraction::intensity_map`].

pub mod cluster;
pub mod diffraction;
pub mod error;
pub mod export;
pub mod geom;
pub mod packing;
pub mod spatial;
pub mod strip;
pub mod superspace;

pub use cluster::{build_cluster, ClusterSpec, GCluster};
pub use error::{Error, Result};
pub use geom::Vec2;
pub use superspace::{embed, Embedding};

/// Default cap on the number of lattice candidates a single enumeration may scan.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
