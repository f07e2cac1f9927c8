//! Per-window structural measures.
//!
//! Every function takes one [`IntervalGraph`] and returns one value per active
//! node, aligned with [`IntervalGraph::nodes`]. All measures are directed:
//! betweenness counts directed shortest paths and closeness follows outgoing
//! edges.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::windowing::{IntervalGraph, TemporalNetwork};
use crate::{Error, NodeId, Result};

/// Sources per betweenness work unit. Partial sums are reduced in chunk
/// order, so the result does not depend on the thread schedule.
const SOURCE_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    #[serde(rename = "in")]
    InDegree,
    #[serde(rename = "out")]
    OutDegree,
    #[serde(rename = "total")]
    TotalDegree,
    Betweenness,
    Closeness,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 5] = [
        MeasureKind::InDegree,
        MeasureKind::OutDegree,
        MeasureKind::TotalDegree,
        MeasureKind::Betweenness,
        MeasureKind::Closeness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::InDegree => "in",
            MeasureKind::OutDegree => "out",
            MeasureKind::TotalDegree => "total",
            MeasureKind::Betweenness => "betweenness",
            MeasureKind::Closeness => "closeness",
        }
    }

    /// Evaluates this measure on one window.
    pub fn evaluate(self, g: &IntervalGraph) -> Vec<f64> {
        let as_f64 = |v: Vec<u32>| v.into_iter().map(f64::from).collect();
        match self {
            MeasureKind::InDegree => as_f64(in_degree(g)),
            MeasureKind::OutDegree => as_f64(out_degree(g)),
            MeasureKind::TotalDegree => as_f64(total_degree(g)),
            MeasureKind::Betweenness => betweenness(g),
            MeasureKind::Closeness => closeness(g),
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown measure `{s}`")))
    }
}

pub fn in_degree(g: &IntervalGraph) -> Vec<u32> {
    (0..g.node_count()).map(|i| g.in_local(i).len() as u32).collect()
}

pub fn out_degree(g: &IntervalGraph) -> Vec<u32> {
    (0..g.node_count()).map(|i| g.out_local(i).len() as u32).collect()
}

/// In-degree plus out-degree; a reciprocated pair counts twice.
pub fn total_degree(g: &IntervalGraph) -> Vec<u32> {
    (0..g.node_count())
        .map(|i| (g.in_local(i).len() + g.out_local(i).len()) as u32)
        .collect()
}

/// Unnormalized directed betweenness: for every node `v`, the sum over
/// ordered pairs `s != v != t` of the fraction of shortest `s -> t` paths
/// passing through `v`.
pub fn betweenness(g: &IntervalGraph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut scratch = BrandesScratch::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                scratch.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();

    let mut total = vec![0.0; n];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

struct BrandesScratch {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<u32>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
        }
    }

    /// Adds the dependencies of source `s` into `acc`.
    fn accumulate(&mut self, g: &IntervalGraph, s: usize, acc: &mut [f64]) {
        self.order.clear();
        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.order.push(s as u32);

        // `order` doubles as the BFS queue
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head] as usize;
            head += 1;
            for &w in g.out_local(v) {
                let w = w as usize;
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.order.push(w as u32);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }

        for &w in self.order.iter().rev() {
            let w = w as usize;
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in g.in_local(w) {
                let v = v as usize;
                if self.dist[v] >= 0 && self.dist[v] + 1 == self.dist[w] {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }

        for &w in &self.order {
            let w = w as usize;
            self.dist[w] = -1;
            self.sigma[w] = 0.0;
            self.delta[w] = 0.0;
        }
    }
}

/// Harmonic closeness over outgoing distances: `sum_{u reachable} 1/d(v,u)`,
/// zero for nodes that reach nobody.
pub fn closeness(g: &IntervalGraph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], Vec::with_capacity(n)),
            |(dist, queue), s| {
                queue.clear();
                dist[s] = 0;
                queue.push(s as u32);
                let mut head = 0;
                let mut sum = 0.0;
                while head < queue.len() {
                    let v = queue[head] as usize;
                    head += 1;
                    if v != s {
                        sum += 1.0 / f64::from(dist[v]);
                    }
                    for &w in g.out_local(v) {
                        if dist[w as usize] == u32::MAX {
                            dist[w as usize] = dist[v] + 1;
                            queue.push(w);
                        }
                    }
                }
                for &v in queue.iter() {
                    dist[v as usize] = u32::MAX;
                }
                sum
            },
        )
        .collect()
}

/// Node-by-window values of one measure over a temporal network.
///
/// Rows follow [`TemporalNetwork::all_nodes`]; a node absent from a window
/// has value zero there.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureMatrix {
    kind: MeasureKind,
    nodes: Vec<NodeId>,
    windows: usize,
    values: Vec<f64>,
}

impl MeasureMatrix {
    /// Builds a matrix from explicit rows (one slice of length `windows` per node).
    pub fn from_rows(kind: MeasureKind, nodes: Vec<NodeId>, rows: &[Vec<f64>]) -> Self {
        assert_eq!(nodes.len(), rows.len(), "one row per node");
        let windows = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == windows), "ragged rows");
        MeasureMatrix {
            kind,
            nodes,
            windows,
            values: rows.concat(),
        }
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn window_count(&self) -> usize {
        self.windows
    }

    /// Values of row `i` for windows `1..=K`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.windows..(i + 1) * self.windows]
    }

    pub fn rows(&self) -> impl Iterator<Item = (NodeId, &[f64])> + '_ {
        self.nodes.iter().enumerate().map(move |(i, &v)| (v, self.row(i)))
    }

    /// Sum of column `l` (1-based).
    pub fn column_sum(&self, l: usize) -> f64 {
        (0..self.nodes.len()).map(|i| self.row(i)[l - 1]).sum()
    }
}

pub fn measure_matrix(tsn: &TemporalNetwork, kind: MeasureKind) -> MeasureMatrix {
    let nodes = tsn.all_nodes().to_vec();
    let k = tsn.len();
    let per_window: Vec<Vec<f64>> = tsn.windows().par_iter().map(|g| kind.evaluate(g)).collect();

    let mut values = vec![0.0; nodes.len() * k];
    for (l, (g, vals)) in tsn.windows().iter().zip(&per_window).enumerate() {
        for (&v, &x) in g.nodes().iter().zip(vals) {
            let row = nodes.binary_search(&v).expect("window node in all_nodes");
            values[row * k + l] = x;
        }
    }
    MeasureMatrix {
        kind,
        nodes,
        windows: k,
        values,
    }
}
