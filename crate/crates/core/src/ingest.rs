//! Edge-log ingestion.
//!
//! Input is a whitespace-separated text edge list, one contact event per
//! line, with `%` or `#` comment lines. Node names are opaque strings that get
//! interned into dense [`NodeId`]s. Interning is canonical (sorted by name,
//! numeric names by value) so that the resulting log does not depend on the
//! order of input lines.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, NodeId, Result};

/// Column layout of the edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// KONECT `out.*` files: `source target [weight [timestamp ...]]`. The
    /// timestamp is the fourth column, or the third if only three are present.
    #[default]
    Konect,
    /// `source target timestamp [ignored ...]`.
    Tsv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "konect" => Ok(Format::Konect),
            "tsv" => Ok(Format::Tsv),
            other => Err(Error::Config(format!(
                "unknown input format `{other}` (expected konect or tsv)"
            ))),
        }
    }
}

/// Bidirectional map between node names and dense indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeTable {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NodeTable {
    /// Builds a table with indices assigned in canonical name order.
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names
            .into_iter()
            .map(Into::into)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        names.sort_by(|a, b| compare_names(a, b));
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), NodeId::from(i)))
            .collect();
        NodeTable { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.names[id.index()]
    }

    pub fn id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Numeric names sort by value and before everything else.
fn compare_names(a: &str, b: &str) -> Ordering {
    let num = |s: &str| {
        if !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit()) {
            s.parse::<u128>().ok()
        } else {
            None
        }
    };
    match (num(a), num(b)) {
        (Some(x), Some(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

/// One directed, timestamped contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub source: NodeId,
    pub target: NodeId,
    /// Seconds since epoch.
    pub timestamp: i64,
}

impl Event {
    fn sort_key(&self) -> (i64, NodeId, NodeId) {
        (self.timestamp, self.source, self.target)
    }
}

/// Time-ordered event sequence over a shared node table.
///
/// Events are sorted by `(timestamp, source, target)`. The span is a closed
/// interval containing every event; logs built by parsing use the event
/// extremes, halves produced by [`split_halves`] carry the half's full range.
#[derive(Debug, Clone)]
pub struct EventLog {
    events: Vec<Event>,
    nodes: Arc<NodeTable>,
    span: (i64, i64),
}

impl EventLog {
    /// Creates a log whose span is the range of its event timestamps.
    pub fn from_events(events: Vec<Event>, nodes: Arc<NodeTable>) -> Result<Self> {
        let t_min = events.iter().map(|e| e.timestamp).min();
        let t_max = events.iter().map(|e| e.timestamp).max();
        match (t_min, t_max) {
            (Some(lo), Some(hi)) => Self::with_span(events, nodes, (lo, hi)),
            _ => Err(Error::EmptyLog {
                malformed: 0,
                self_loops: 0,
            }),
        }
    }

    /// Creates a log with an explicit closed span that must contain every event.
    pub fn with_span(mut events: Vec<Event>, nodes: Arc<NodeTable>, span: (i64, i64)) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptyLog {
                malformed: 0,
                self_loops: 0,
            });
        }
        let (t_min, t_max) = span;
        for e in &events {
            if e.timestamp < t_min || e.timestamp > t_max {
                return Err(Error::OutsideSpan {
                    t: e.timestamp,
                    t_min,
                    t_max,
                });
            }
            assert!(
                e.source.index() < nodes.len() && e.target.index() < nodes.len(),
                "event references a node outside the node table"
            );
        }
        events.sort_by_key(Event::sort_key);
        Ok(EventLog { events, nodes, span })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn nodes(&self) -> &Arc<NodeTable> {
        &self.nodes
    }

    pub fn span(&self) -> (i64, i64) {
        self.span
    }

    /// Writes the log as a `source target timestamp` edge list.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.events {
            writeln!(
                w,
                "{} {} {}",
                self.nodes.name(e.source),
                self.nodes.name(e.target),
                e.timestamp
            )?;
        }
        w.flush()
    }
}

/// Line counters surfaced alongside a parsed log.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParseStats {
    pub lines: usize,
    pub comments: usize,
    pub malformed: usize,
    pub self_loops: usize,
}

#[derive(Debug, Clone)]
pub struct ParsedLog {
    pub log: EventLog,
    pub stats: ParseStats,
}

/// Parses an edge list. Malformed lines are skipped and counted; an empty
/// result is an error.
pub fn parse_event_log<R: BufRead>(reader: R, format: Format) -> Result<ParsedLog> {
    let mut stats = ParseStats::default();
    let mut raw: Vec<(String, String, i64)> = Vec::new();

    for line in reader.lines() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        stats.lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('%') || trimmed.starts_with('#') {
            stats.comments += 1;
            continue;
        }
        let cols: Vec<&str> = trimmed.split_whitespace().collect();
        let ts_col = match (format, cols.len()) {
            (_, n) if n < 3 => None,
            (Format::Konect, n) if n >= 4 => Some(cols[3]),
            _ => Some(cols[2]),
        };
        let Some(timestamp) = ts_col.and_then(|c| c.parse::<i64>().ok()) else {
            stats.malformed += 1;
            tracing::debug!(line = stats.lines, "skipping malformed line");
            continue;
        };
        if cols[0] == cols[1] {
            stats.self_loops += 1;
            continue;
        }
        raw.push((cols[0].to_owned(), cols[1].to_owned(), timestamp));
    }

    if raw.is_empty() {
        return Err(Error::EmptyLog {
            malformed: stats.malformed,
            self_loops: stats.self_loops,
        });
    }
    if stats.malformed > 0 {
        tracing::warn!(malformed = stats.malformed, "skipped malformed lines");
    }

    let nodes = NodeTable::from_names(raw.iter().flat_map(|(s, t, _)| [s.as_str(), t.as_str()]));
    let events = raw
        .iter()
        .map(|(s, t, ts)| Event {
            source: nodes.id(s).expect("interned"),
            target: nodes.id(t).expect("interned"),
            timestamp: *ts,
        })
        .collect();
    let log = EventLog::from_events(events, Arc::new(nodes))?;
    Ok(ParsedLog { log, stats })
}

pub fn read_event_log(path: impl AsRef<Path>, format: Format) -> Result<ParsedLog> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_event_log(BufReader::new(file), format).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other.context(path.display().to_string()),
    })
}

/// Splits a log at the midpoint of its span into a learning and an
/// evaluation half.
///
/// With `b = (t_min + t_max) / 2` (exact), learning holds `[t_min, b)` and
/// evaluation holds `[b, t_max]`. Both halves keep the parent node table.
pub fn split_halves(log: &EventLog) -> Result<(EventLog, EventLog)> {
    let (t_min, t_max) = log.span();
    let twice_mid = t_min as i128 + t_max as i128;
    let (learning, evaluation): (Vec<Event>, Vec<Event>) =
        log.events().iter().partition(|e| 2 * (e.timestamp as i128) < twice_mid);

    if learning.is_empty() || evaluation.is_empty() {
        let half = if learning.is_empty() { "learning" } else { "evaluation" };
        return Err(Error::EmptyHalf { half, t_min, t_max });
    }

    // first integer second at or after the midpoint
    let cut = (twice_mid + 1).div_euclid(2) as i64;
    let nodes = Arc::clone(log.nodes());
    Ok((
        EventLog::with_span(learning, Arc::clone(&nodes), (t_min, cut - 1))?,
        EventLog::with_span(evaluation, nodes, (cut, t_max))?,
    ))
}
