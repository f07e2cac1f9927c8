//! Seed selection on temporal social networks.
//!
//! The pipeline mirrors how the crate is laid out:
//!
//! - [`ingest`] parses timestamped edge logs and splits them into a learning
//!   and an evaluation half of equal duration.
//! - [`windowing`] cuts a half into `K` equal-duration interval graphs.
//! - [`measures`] computes per-window degree, betweenness and closeness.
//! - [`aggregation`] collapses a node's per-window values into one
//!   time-aware score (the twelve max/min/sum, log, power and forgetting
//!   aggregations).
//! - [`seeding`] ranks nodes and draws seed sets, including the two random
//!   baselines.
//! - [`propagation`] runs the temporal linear-threshold process.
//! - [`analysis`] holds neighbor turnover and the Friedman / Nemenyi tests.
//! - [`experiment`] wires everything into a config-driven runner that
//!   writes CSV and JSON reports.

pub mod aggregation;
pub mod analysis;
mod error;
pub mod experiment;
pub mod ingest;
pub mod measures;
pub mod propagation;
pub mod seeding;
pub mod windowing;

pub use error::{Error, ErrorKind, Result};

use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense index of a node in an [`ingest::NodeTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
