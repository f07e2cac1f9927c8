//! How much of a seed's neighborhood is replaced from window to window.
//!
//! For window `t` and seed `s` with a non-empty neighborhood `N_t(s)`,
//! turnover is `|N_t(s) \ N_ref(s)| / |N_t(s)|`, where the reference is the
//! previous window's neighborhood (or the first window's). A window's value
//! is the mean over seeds with a non-empty neighborhood there.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::seeding::SeedSet;
use crate::windowing::{IntervalGraph, TemporalNetwork};
use crate::{Error, NodeId, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnoverDirection {
    In,
    #[default]
    Out,
}

impl FromStr for TurnoverDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(TurnoverDirection::In),
            "out" => Ok(TurnoverDirection::Out),
            _ => Err(Error::Config(format!("unknown turnover direction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnoverBaseline {
    /// Compare with the window just before.
    #[default]
    Previous,
    /// Compare with the first window of the sequence (the supplied initial
    /// window if any, else evaluation window 1).
    First,
}

impl FromStr for TurnoverBaseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "previous" => Ok(TurnoverBaseline::Previous),
            "first" => Ok(TurnoverBaseline::First),
            _ => Err(Error::Config(format!("unknown turnover baseline `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TurnoverOptions {
    pub direction: TurnoverDirection,
    pub baseline: TurnoverBaseline,
}

/// Per-window turnover percentages in `[0, 100]`.
///
/// `None` marks windows where no seed had any neighbor. For reports combined
/// over several random runs the `*_std` fields hold the sample standard
/// deviation across runs; for a single run they are empty / `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TurnoverReport {
    pub per_window: Vec<Option<f64>>,
    pub mean: Option<f64>,
    pub per_window_std: Vec<Option<f64>>,
    pub mean_std: Option<f64>,
}

fn neighborhood(g: &IntervalGraph, v: NodeId, dir: TurnoverDirection) -> BTreeSet<NodeId> {
    match dir {
        TurnoverDirection::Out => g.out_neighbors(v).collect(),
        TurnoverDirection::In => g.in_neighbors(v).collect(),
    }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn sample_std(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs.iter().copied())?;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    Some(var.sqrt())
}

/// Turnover of a seed set's neighborhoods over the evaluation windows.
///
/// `initial` is the window preceding evaluation window 1 (typically the last
/// learning window); without it, window 1 is compared against an empty set.
pub fn neighbor_turnover(
    tsn: &TemporalNetwork,
    seeds: &SeedSet,
    initial: Option<&IntervalGraph>,
    opts: TurnoverOptions,
) -> Result<TurnoverReport> {
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let dir = opts.direction;
    let mut per_window = Vec::with_capacity(tsn.len());

    let first_of = |s: NodeId| match initial {
        Some(g) => neighborhood(g, s, dir),
        None => tsn
            .windows()
            .first()
            .map(|g| neighborhood(g, s, dir))
            .unwrap_or_default(),
    };

    let mut previous: Vec<BTreeSet<NodeId>> = seeds
        .nodes()
        .iter()
        .map(|&s| initial.map(|g| neighborhood(g, s, dir)).unwrap_or_default())
        .collect();
    let first: Vec<BTreeSet<NodeId>> = match opts.baseline {
        TurnoverBaseline::First => seeds.nodes().iter().map(|&s| first_of(s)).collect(),
        TurnoverBaseline::Previous => Vec::new(),
    };

    for g in tsn.windows() {
        let mut values = Vec::new();
        for (i, &s) in seeds.nodes().iter().enumerate() {
            let current = neighborhood(g, s, dir);
            if !current.is_empty() {
                let reference = match opts.baseline {
                    TurnoverBaseline::Previous => &previous[i],
                    TurnoverBaseline::First => &first[i],
                };
                let fresh = current.difference(reference).count();
                values.push(100.0 * fresh as f64 / current.len() as f64);
            }
            previous[i] = current;
        }
        per_window.push(mean(values));
    }

    let overall = mean(per_window.iter().flatten().copied());
    Ok(TurnoverReport {
        per_window,
        mean: overall,
        per_window_std: Vec::new(),
        mean_std: None,
    })
}

/// Averages single-run reports (e.g. random baselines) window by window.
pub fn combine_runs(runs: &[TurnoverReport]) -> TurnoverReport {
    let windows = runs.iter().map(|r| r.per_window.len()).max().unwrap_or(0);
    let column = |l: usize| -> Vec<f64> {
        runs.iter()
            .filter_map(|r| r.per_window.get(l).copied().flatten())
            .collect()
    };
    let per_window = (0..windows).map(|l| mean(column(l))).collect();
    let per_window_std = (0..windows).map(|l| sample_std(&column(l))).collect();
    let run_means: Vec<f64> = runs.iter().filter_map(|r| r.mean).collect();
    TurnoverReport {
        per_window,
        mean: mean(run_means.iter().copied()),
        per_window_std,
        mean_std: sample_std(&run_means),
    }
}
