//! Time-aware aggregation of a node's per-window measure values.
//!
//! For a row `m_1 .. m_K` (window 1 oldest, window K most recent):
//!
//! | kind     | score                                  |
//! |----------|----------------------------------------|
//! | `Max`    | `max_l m_l`                            |
//! | `Min`    | `min_l m_l`                            |
//! | `Sum`    | `sum_l m_l`                            |
//! | `MaxLog` | `max_l log_{K-l+1} m_l`                |
//! | `MinLog` | `min_l log_{K-l+1} m_l`                |
//! | `SumLog` | `sum_l log_{K-l+1} m_l`                |
//! | `MaxPow` | `max_l m_l^l`                          |
//! | `MinPow` | `min_l m_l^l`                          |
//! | `SumPow` | `sum_l m_l^l`                          |
//! | `Lf`     | `sum_l l * m_l`                        |
//! | `Hf`     | `sum_l m_l / (K-l+1)`                  |
//! | `Ef`     | `sum_l m_l / e^l`                      |
//!
//! The logarithms are made total: `log_b(0) = 0` for every base, and the base
//! 1 logarithm (the most recent window) is the identity. Values in `(0, 1)`
//! keep their negative logarithm. With [`AggregationOptions::ef_recency`]
//! the exponential weight becomes `e^(l-K)`, so the latest window weighs most.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::measures::{MeasureKind, MeasureMatrix};
use crate::{Error, NodeId, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationKind {
    Max,
    Min,
    Sum,
    MaxLog,
    MinLog,
    SumLog,
    MaxPow,
    MinPow,
    SumPow,
    Lf,
    Hf,
    Ef,
}

impl AggregationKind {
    pub const ALL: [AggregationKind; 12] = [
        AggregationKind::Max,
        AggregationKind::Min,
        AggregationKind::Sum,
        AggregationKind::MaxLog,
        AggregationKind::MinLog,
        AggregationKind::SumLog,
        AggregationKind::MaxPow,
        AggregationKind::MinPow,
        AggregationKind::SumPow,
        AggregationKind::Lf,
        AggregationKind::Hf,
        AggregationKind::Ef,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AggregationKind::Max => "max",
            AggregationKind::Min => "min",
            AggregationKind::Sum => "sum",
            AggregationKind::MaxLog => "maxlog",
            AggregationKind::MinLog => "minlog",
            AggregationKind::SumLog => "sumlog",
            AggregationKind::MaxPow => "maxpow",
            AggregationKind::MinPow => "minpow",
            AggregationKind::SumPow => "sumpow",
            AggregationKind::Lf => "lf",
            AggregationKind::Hf => "hf",
            AggregationKind::Ef => "ef",
        }
    }
}

impl fmt::Display for AggregationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AggregationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AggregationKind::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown aggregation `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregationOptions {
    /// Weight window `l` by `e^(l-K)` instead of `e^-l` in [`AggregationKind::Ef`].
    pub ef_recency: bool,
}

/// Logarithm with the total extensions used by the log aggregations.
fn forgetting_log(x: f64, base: usize) -> f64 {
    if x == 0.0 {
        0.0
    } else if base == 1 {
        x
    } else {
        x.ln() / (base as f64).ln()
    }
}

enum Fold {
    Max,
    Min,
    Sum,
}

fn fold_of(kind: AggregationKind) -> Fold {
    use AggregationKind::*;
    match kind {
        Max | MaxLog | MaxPow => Fold::Max,
        Min | MinLog | MinPow => Fold::Min,
        Sum | SumLog | SumPow | Lf | Hf | Ef => Fold::Sum,
    }
}

/// Transformed value of window `l` (1-based) out of `k`.
fn term(kind: AggregationKind, opts: AggregationOptions, k: usize, l: usize, m: f64) -> f64 {
    use AggregationKind::*;
    match kind {
        Max | Min | Sum => m,
        MaxLog | MinLog | SumLog => forgetting_log(m, k - l + 1),
        MaxPow | MinPow | SumPow => m.powi(l as i32),
        Lf => l as f64 * m,
        Hf => m / (k - l + 1) as f64,
        Ef if opts.ef_recency => m * (l as f64 - k as f64).exp(),
        Ef => m / (l as f64).exp(),
    }
}

/// Scores one row. Returns the score and whether it had to be clamped.
pub fn aggregate_row(row: &[f64], kind: AggregationKind, opts: AggregationOptions) -> (f64, bool) {
    let k = row.len();
    if k == 0 {
        return (0.0, false);
    }
    let terms = row.iter().enumerate().map(|(i, &m)| term(kind, opts, k, i + 1, m));
    let score = match fold_of(kind) {
        Fold::Max => terms.fold(f64::NEG_INFINITY, f64::max),
        Fold::Min => terms.fold(f64::INFINITY, f64::min),
        Fold::Sum => terms.sum(),
    };
    if score.is_infinite() {
        (score.signum() * f64::MAX, true)
    } else {
        (score, false)
    }
}

/// One aggregated score per node of a [`MeasureMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub measure: MeasureKind,
    pub aggregation: AggregationKind,
    pub windows: usize,
    pub nodes: Vec<NodeId>,
    pub scores: Vec<f64>,
    /// Nodes whose score overflowed and was clamped to the largest finite value.
    pub clamped: usize,
}

impl ScoreVector {
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.nodes.iter().copied().zip(self.scores.iter().copied())
    }

    pub fn get(&self, v: NodeId) -> Option<f64> {
        self.nodes.binary_search(&v).ok().map(|i| self.scores[i])
    }
}

pub fn aggregate(matrix: &MeasureMatrix, kind: AggregationKind, opts: AggregationOptions) -> ScoreVector {
    let mut clamped = 0;
    let scores = (0..matrix.nodes().len())
        .map(|i| {
            let (s, c) = aggregate_row(matrix.row(i), kind, opts);
            clamped += usize::from(c);
            s
        })
        .collect();
    if clamped > 0 {
        tracing::warn!(
            measure = %matrix.kind(),
            aggregation = %kind,
            clamped,
            "aggregated scores overflowed and were clamped"
        );
    }
    ScoreVector {
        measure: matrix.kind(),
        aggregation: kind,
        windows: matrix.window_count(),
        nodes: matrix.nodes().to_vec(),
        scores,
        clamped,
    }
}
