//! Test helpers and slow, literal reference implementations.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;
use std::sync::Arc;

use rand::Rng;
use tseed_core::aggregation::AggregationKind;
use tseed_core::ingest::{Event, EventLog, NodeTable};
use tseed_core::windowing::{build_tsn, IntervalGraph, TemporalNetwork};
use tseed_core::NodeId;

pub type Edges = Vec<(u32, u32)>;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Nodes named "0".."n-1", so that names and ids coincide.
pub fn table(n: usize) -> Arc<NodeTable> {
    Arc::new(NodeTable::from_names((0..n).map(|i| i.to_string())))
}

/// A network whose window `l` holds exactly `windows[l]`.
pub fn tsn_from_windows(n: usize, windows: &[Edges]) -> TemporalNetwork {
    let k = windows.len();
    let events = windows
        .iter()
        .enumerate()
        .flat_map(|(l, es)| {
            es.iter().map(move |&(s, t)| Event {
                source: NodeId(s),
                target: NodeId(t),
                timestamp: 10 * l as i64 + 5,
            })
        })
        .collect();
    let log = EventLog::with_span(events, table(n), (0, 10 * k as i64)).unwrap();
    build_tsn(&log, k).unwrap()
}

pub fn graph(edges: &[(u32, u32)]) -> IntervalGraph {
    IntervalGraph::from_edges(1, (0.0, 1.0), edges.iter().map(|&(s, t)| (NodeId(s), NodeId(t))))
}

/// Random directed edges without self-loops (duplicates allowed).
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, max_edges: usize) -> Edges {
    let count = rng.random_range(0..=max_edges);
    (0..count)
        .filter_map(|_| {
            let s = rng.random_range(0..n as u32);
            let t = rng.random_range(0..n as u32);
            (s != t).then_some((s, t))
        })
        .collect()
}

fn dedup(edges: &[(u32, u32)]) -> BTreeSet<(u32, u32)> {
    edges.iter().copied().filter(|(s, t)| s != t).collect()
}

fn bfs(n: usize, adj: &[Vec<u32>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(dist[v].unwrap() + 1);
                queue.push_back(w as usize);
            }
        }
    }
    dist
}

fn adjacency(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for (s, t) in dedup(edges) {
        adj[s as usize].push(t);
    }
    adj
}

/// Betweenness by listing every shortest path of every ordered pair.
pub fn brute_betweenness(n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
    let adj = adjacency(n, edges);
    let mut score = vec![0.0; n];
    for s in 0..n {
        let dist = bfs(n, &adj, s);
        for t in 0..n {
            let Some(d) = dist[t] else { continue };
            if t == s {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if path.len() - 1 == d {
                    if last == t {
                        paths.push(path);
                    }
                    continue;
                }
                for &w in &adj[last] {
                    let mut next = path.clone();
                    next.push(w as usize);
                    stack.push(next);
                }
            }
            let sigma = paths.len() as f64;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                score[v] += through / sigma;
            }
        }
    }
    score
}

/// Sum of inverse BFS distances to every reachable node.
pub fn bfs_closeness(n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
    let adj = adjacency(n, edges);
    (0..n)
        .map(|s| {
            bfs(n, &adj, s)
                .iter()
                .enumerate()
                .filter(|&(u, d)| u != s && d.is_some())
                .map(|(_, d)| 1.0 / d.unwrap() as f64)
                .sum()
        })
        .collect()
}

/// Aggregations written out term by term.
pub fn naive_aggregate(row: &[f64], kind: AggregationKind, ef_recency: bool) -> f64 {
    use AggregationKind::*;
    let k = row.len();
    let log = |x: f64, base: usize| -> f64 {
        if x == 0.0 {
            0.0
        } else if base == 1 {
            x
        } else {
            x.log2() / (base as f64).log2()
        }
    };
    let mut terms = Vec::with_capacity(k);
    for l in 1..=k {
        let m = row[l - 1];
        terms.push(match kind {
            Max | Min | Sum => m,
            MaxLog | MinLog | SumLog => log(m, k - l + 1),
            MaxPow | MinPow | SumPow => {
                let mut p = 1.0;
                for _ in 0..l {
                    p *= m;
                }
                p
            }
            Lf => l as f64 * m,
            Hf => m / (k - l + 1) as f64,
            Ef if ef_recency => m * std::f64::consts::E.powi(l as i32 - k as i32),
            Ef => m * std::f64::consts::E.powi(-(l as i32)),
        });
    }
    match kind {
        Max | MaxLog | MaxPow => terms.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Min | MinLog | MinPow => terms.iter().copied().fold(f64::INFINITY, f64::min),
        _ => terms.iter().sum(),
    }
}

/// Literal linear-threshold evaluation with `phi = num / den`.
///
/// Returns the newly influenced set of every window.
pub fn naive_lt(windows: &[Edges], seeds: &BTreeSet<u32>, num: u64, den: u64) -> Vec<BTreeSet<u32>> {
    let mut active: BTreeSet<u32> = seeds.clone();
    let mut out = Vec::new();
    for edges in windows {
        let edges = dedup(edges);
        let nodes: BTreeSet<u32> = edges.iter().flat_map(|&(s, t)| [s, t]).collect();
        let mut fresh = BTreeSet::new();
        for &v in &nodes {
            if active.contains(&v) {
                continue;
            }
            let inn: BTreeSet<u32> = edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect();
            if inn.is_empty() {
                continue;
            }
            let hits = inn.intersection(&active).count() as u64;
            if hits * den >= num * inn.len() as u64 {
                fresh.insert(v);
            }
        }
        active.extend(fresh.iter().copied());
        out.push(fresh);
    }
    out
}

pub fn ids(set: &BTreeSet<u32>) -> Vec<NodeId> {
    set.iter().map(|&v| NodeId(v)).collect()
}

pub fn relative_error(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }
}
