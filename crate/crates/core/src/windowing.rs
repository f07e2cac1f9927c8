//! Temporal networks as sequences of equal-duration interval graphs.

use std::sync::Arc;

use rayon::prelude::*;

use crate::ingest::{EventLog, NodeTable};
use crate::{Error, NodeId, Result};

/// Static directed graph aggregating the events of one time window.
///
/// Nodes are exactly the endpoints of the window's edges, stored sorted by
/// [`NodeId`]; adjacency is kept in compressed rows over local indices
/// (positions in [`IntervalGraph::nodes`]). Repeated events between the same
/// ordered pair collapse into a single unweighted edge.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalGraph {
    index: usize,
    bounds: (f64, f64),
    nodes: Vec<NodeId>,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<u32>,
}

impl IntervalGraph {
    /// Builds a window graph from directed edges. Duplicates and self-loops
    /// are dropped.
    pub fn from_edges<I>(index: usize, bounds: (f64, f64), edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs: Vec<(NodeId, NodeId)> = edges.into_iter().filter(|(s, t)| s != t).collect();
        pairs.sort_unstable();
        pairs.dedup();

        let mut nodes: Vec<NodeId> = pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
        nodes.sort_unstable();
        nodes.dedup();

        let local = |v: NodeId| nodes.binary_search(&v).expect("endpoint present") as u32;
        let local_pairs: Vec<(u32, u32)> = pairs.iter().map(|&(s, t)| (local(s), local(t))).collect();

        let (out_offsets, out_targets) = compress(nodes.len(), local_pairs.iter().copied());
        let mut reversed: Vec<(u32, u32)> = local_pairs.iter().map(|&(s, t)| (t, s)).collect();
        reversed.sort_unstable();
        let (in_offsets, in_sources) = compress(nodes.len(), reversed.into_iter());

        IntervalGraph {
            index,
            bounds,
            nodes,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }

    /// 1-based position of the window in its temporal network.
    pub fn window_index(&self) -> usize {
        self.index
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.bounds
    }

    /// Active nodes, sorted.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn local_index(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.local_index(v).is_some()
    }

    /// Out-neighbors of a local index, as local indices (sorted).
    pub fn out_local(&self, i: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    /// In-neighbors of a local index, as local indices (sorted).
    pub fn in_local(&self, i: usize) -> &[u32] {
        &self.in_sources[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    /// Nodes `v` has edges towards; empty if `v` is inactive.
    pub fn out_neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let row = self.local_index(v).map(|i| self.out_local(i)).unwrap_or(&[]);
        row.iter().map(|&j| self.nodes[j as usize])
    }

    /// Nodes with an edge towards `v`; empty if `v` is inactive.
    pub fn in_neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let row = self.local_index(v).map(|i| self.in_local(i)).unwrap_or(&[]);
        row.iter().map(|&j| self.nodes[j as usize])
    }

    /// All edges in `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.nodes.len()).flat_map(move |i| {
            self.out_local(i)
                .iter()
                .map(move |&j| (self.nodes[i], self.nodes[j as usize]))
        })
    }

    /// `|E| / |V|`, zero for an empty window.
    pub fn average_in_degree(&self) -> f64 {
        if self.nodes.is_empty() {
            0.0
        } else {
            self.edge_count() as f64 / self.node_count() as f64
        }
    }
}

/// CSR from `(row, col)` pairs sorted by row.
fn compress(rows: usize, pairs: impl Iterator<Item = (u32, u32)>) -> (Vec<usize>, Vec<u32>) {
    let mut offsets = vec![0usize; rows + 1];
    let mut cols = Vec::new();
    for (r, c) in pairs {
        offsets[r as usize + 1] += 1;
        cols.push(c);
    }
    for i in 0..rows {
        offsets[i + 1] += offsets[i];
    }
    (offsets, cols)
}

/// Ordered sequence of `K` interval graphs covering a log's span.
///
/// Window `l` covers `[t_min + (l-1)d, t_min + l*d)` with `d = (t_max - t_min) / K`;
/// the last window is closed on the right.
#[derive(Debug, Clone)]
pub struct TemporalNetwork {
    windows: Vec<IntervalGraph>,
    span: (i64, i64),
    node_table: Arc<NodeTable>,
    all_nodes: Vec<NodeId>,
}

impl TemporalNetwork {
    pub fn windows(&self) -> &[IntervalGraph] {
        &self.windows
    }

    /// Window by 1-based index.
    pub fn window(&self, l: usize) -> &IntervalGraph {
        &self.windows[l - 1]
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn span(&self) -> (i64, i64) {
        self.span
    }

    pub fn window_duration(&self) -> f64 {
        (self.span.1 - self.span.0) as f64 / self.windows.len() as f64
    }

    pub fn node_table(&self) -> &Arc<NodeTable> {
        &self.node_table
    }

    /// Union of active nodes over all windows, sorted.
    pub fn all_nodes(&self) -> &[NodeId] {
        &self.all_nodes
    }

    pub fn window_of(&self, t: i64) -> Result<usize> {
        window_of(t, self.span, self.windows.len())
    }

    /// Number of windows each node of [`all_nodes`](Self::all_nodes) is active in.
    pub fn occurrences(&self) -> Vec<(NodeId, usize)> {
        let mut counts = vec![0usize; self.node_table.len()];
        for w in &self.windows {
            for v in w.nodes() {
                counts[v.index()] += 1;
            }
        }
        self.all_nodes.iter().map(|&v| (v, counts[v.index()])).collect()
    }
}

/// 1-based window containing `t` for a span cut into `k` equal windows.
///
/// A zero-width span maps every timestamp to window 1.
pub fn window_of(t: i64, span: (i64, i64), k: usize) -> Result<usize> {
    let (t_min, t_max) = span;
    if k == 0 {
        return Err(Error::InvalidWindowCount(k));
    }
    if t < t_min || t > t_max {
        return Err(Error::OutsideSpan { t, t_min, t_max });
    }
    if t_max == t_min {
        return Ok(1);
    }
    let offset = (t as i128 - t_min as i128) * k as i128;
    let width = t_max as i128 - t_min as i128;
    Ok(((offset / width) as usize + 1).min(k))
}

/// Cuts a log into `k` interval graphs of equal duration.
pub fn build_tsn(log: &EventLog, k: usize) -> Result<TemporalNetwork> {
    if k == 0 {
        return Err(Error::InvalidWindowCount(k));
    }
    let span = log.span();
    let mut buckets: Vec<Vec<(NodeId, NodeId)>> = vec![Vec::new(); k];
    for e in log.events() {
        let l = window_of(e.timestamp, span, k)?;
        buckets[l - 1].push((e.source, e.target));
    }

    let duration = (span.1 - span.0) as f64 / k as f64;
    let windows: Vec<IntervalGraph> = buckets
        .into_par_iter()
        .enumerate()
        .map(|(i, edges)| {
            let start = span.0 as f64 + i as f64 * duration;
            let end = if i + 1 == k {
                span.1 as f64
            } else {
                span.0 as f64 + (i + 1) as f64 * duration
            };
            IntervalGraph::from_edges(i + 1, (start, end), edges)
        })
        .collect();

    let mut all_nodes: Vec<NodeId> = windows.iter().flat_map(|w| w.nodes().iter().copied()).collect();
    all_nodes.sort_unstable();
    all_nodes.dedup();

    Ok(TemporalNetwork {
        windows,
        span,
        node_table: Arc::clone(log.nodes()),
        all_nodes,
    })
}
