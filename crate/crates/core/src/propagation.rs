//! Linear-threshold influence spread over a temporal network.
//!
//! Windows are processed in order. In window `k`, a node that is active in
//! the window, not yet influenced, and has at least one in-neighbor there
//! becomes influenced when the fraction of its in-neighbors already
//! influenced before window `k` reaches `phi`. By default adoption is a
//! single synchronous pass per window: nodes influenced in window `k` start
//! influencing others from window `k + 1`.

use serde::Serialize;

use crate::seeding::SeedSet;
use crate::windowing::TemporalNetwork;
use crate::{Error, NodeId, Result};

/// Fractional digits kept when turning `phi` into an exact ratio.
const MAX_DECIMALS: usize = 18;

/// Adoption threshold held as an exact decimal ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    value: f64,
    #[serde(skip)]
    numerator: u128,
    #[serde(skip)]
    denominator: u128,
}

impl Threshold {
    /// `phi` must lie in `(0, 1]`. The ratio is taken from the shortest
    /// decimal spelling of `phi`, so `0.33` means exactly `33/100`.
    pub fn new(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(Error::InvalidThreshold(phi));
        }
        let text = phi.to_string();
        let (int, frac) = text.split_once('.').unwrap_or((&text, ""));
        let frac = &frac[..frac.len().min(MAX_DECIMALS)];
        let denominator = 10u128.pow(frac.len() as u32);
        let numerator = format!("{int}{frac}").parse::<u128>().expect("decimal digits");
        if numerator == 0 {
            return Err(Error::InvalidThreshold(phi));
        }
        Ok(Threshold {
            value: phi,
            numerator,
            denominator,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// `hits / total >= phi`, evaluated exactly. False when `total` is zero.
    pub fn is_met(&self, hits: usize, total: usize) -> bool {
        total > 0 && hits as u128 * self.denominator >= self.numerator * total as u128
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdConfig {
    pub phi: Threshold,
    /// Let nodes influenced within a window recruit others in that same
    /// window, iterating to a fixed point.
    pub within_window_fixpoint: bool,
}

impl ThresholdConfig {
    pub fn new(phi: f64) -> Result<Self> {
        Ok(ThresholdConfig {
            phi: Threshold::new(phi)?,
            within_window_fixpoint: false,
        })
    }
}

/// Result of one propagation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropagationTrace {
    seeds: Vec<NodeId>,
    influenced_per_window: Vec<Vec<NodeId>>,
    cumulative_counts: Vec<usize>,
}

impl PropagationTrace {
    /// Φ(0).
    pub fn seeds(&self) -> &[NodeId] {
        &self.seeds
    }

    /// Φ(1)..Φ(K): nodes first influenced in each window, sorted.
    pub fn influenced_per_window(&self) -> &[Vec<NodeId>] {
        &self.influenced_per_window
    }

    /// `|Φ(0) ∪ .. ∪ Φ(k)|` for `k = 0..=K`.
    pub fn cumulative_counts(&self) -> &[usize] {
        &self.cumulative_counts
    }

    pub fn total_influenced(&self) -> usize {
        *self.cumulative_counts.last().expect("at least the seed count")
    }

    pub fn total_influenced_excluding_seeds(&self) -> usize {
        self.total_influenced() - self.seeds.len()
    }
}

pub fn total_influenced(trace: &PropagationTrace) -> usize {
    trace.total_influenced()
}

pub fn propagate_lt(tsn: &TemporalNetwork, seeds: &SeedSet, cfg: &ThresholdConfig) -> PropagationTrace {
    let mut influenced = vec![false; tsn.node_table().len()];
    for &s in seeds.nodes() {
        influenced[s.index()] = true;
    }
    let mut count = seeds.len();
    let mut cumulative_counts = vec![count];
    let mut influenced_per_window = Vec::with_capacity(tsn.len());

    for g in tsn.windows() {
        let nodes = g.nodes();
        let mut adopted: Vec<NodeId> = Vec::new();
        loop {
            let round: Vec<NodeId> = (0..nodes.len())
                .filter(|&i| !influenced[nodes[i].index()])
                .filter(|&i| {
                    let ins = g.in_local(i);
                    let hits = ins.iter().filter(|&&j| influenced[nodes[j as usize].index()]).count();
                    cfg.phi.is_met(hits, ins.len())
                })
                .map(|i| nodes[i])
                .collect();
            if round.is_empty() {
                break;
            }
            for &v in &round {
                influenced[v.index()] = true;
            }
            adopted.extend(round);
            if !cfg.within_window_fixpoint {
                break;
            }
        }
        adopted.sort_unstable();
        count += adopted.len();
        cumulative_counts.push(count);
        influenced_per_window.push(adopted);
    }

    PropagationTrace {
        seeds: seeds.nodes().to_vec(),
        influenced_per_window,
        cumulative_counts,
    }
}
