//! Node rankings and seed-set selection.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aggregation::ScoreVector;
use crate::{Error, NodeId, Result};

/// Nodes ordered by descending score, ties broken by ascending [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    label: String,
    entries: Vec<(NodeId, f64)>,
}

impl Ranking {
    pub fn from_scores<I>(label: impl Into<String>, scores: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, f64)>,
    {
        let mut entries: Vec<(NodeId, f64)> = scores.into_iter().collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Ranking {
            label: label.into(),
            entries,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[(NodeId, f64)] {
        &self.entries
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn rank_nodes(scores: &ScoreVector) -> Ranking {
    Ranking::from_scores(format!("{}:{}", scores.measure, scores.aggregation), scores.iter())
}

/// The initially influenced nodes, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedSet {
    strategy: String,
    nodes: Vec<NodeId>,
}

impl SeedSet {
    pub fn new(strategy: impl Into<String>, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut nodes: Vec<NodeId> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        SeedSet {
            strategy: strategy.into(),
            nodes,
        }
    }

    pub fn empty(strategy: impl Into<String>) -> Self {
        SeedSet::new(strategy, [])
    }

    pub fn strategy(&self) -> &str {
        &self.strategy
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &SeedSet) -> bool {
        self.nodes.iter().all(|&v| other.contains(v))
    }
}

/// `ceil(fraction * n)`, at least 1.
///
/// Products within 1e-9 of an integer are treated as that integer so that,
/// e.g., `0.07 * 100` yields 7 and not 8.
pub fn seed_count(n: usize, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidFraction(fraction));
    }
    let x = fraction * n as f64;
    let nearest = x.round();
    let m = if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    Ok((m as usize).clamp(1, n.max(1)))
}

/// Top `ceil(fraction * |ranking|)` nodes of a ranking.
pub fn select_seeds(ranking: &Ranking, fraction: f64) -> Result<SeedSet> {
    if ranking.is_empty() {
        return Err(Error::EmptyRanking);
    }
    let m = seed_count(ranking.len(), fraction)?;
    Ok(SeedSet::new(ranking.label(), ranking.nodes().take(m)))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample of `m` nodes without replacement.
pub fn random_seeds(v0: &[NodeId], m: usize, rng_seed: u64) -> Result<SeedSet> {
    if m > v0.len() {
        return Err(Error::NotEnoughNodes {
            requested: m,
            available: v0.len(),
        });
    }
    let picked = index::sample(&mut rng(rng_seed), v0.len(), m);
    Ok(SeedSet::new("random", picked.into_iter().map(|i| v0[i])))
}

/// Sample of `m` nodes without replacement, each draw weighted by the number
/// of windows the node occurs in. Nodes that never occur are never drawn.
pub fn random_freq_seeds(occurrence: &[(NodeId, usize)], m: usize, rng_seed: u64) -> Result<SeedSet> {
    let eligible: Vec<(NodeId, usize)> = occurrence.iter().copied().filter(|&(_, c)| c > 0).collect();
    if m > eligible.len() {
        return Err(Error::NotEnoughNodes {
            requested: m,
            available: eligible.len(),
        });
    }
    let picked = index::sample_weighted(&mut rng(rng_seed), eligible.len(), |i| eligible[i].1 as f64, m)
        .expect("weights are positive and finite");
    Ok(SeedSet::new("randomfreq", picked.into_iter().map(|i| eligible[i].0)))
}
