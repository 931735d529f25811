//! Weighted temporal directed graphs.
//!
//! A graph is a vertex table plus a multiset of timestamped edges
//! `(u, v, w, t)`. Multi-edges and self-loops are kept as given. The graph is
//! immutable once built; every derived index (sorted timestamps, per-vertex
//! active timestamps, active-pair offsets) is computed by [`GraphBuilder::build`].

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type Timestamp = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemporalEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: u64,
    pub timestamp: Timestamp,
}

/// Column layout of an edge-list file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnMode {
    /// `source target weight timestamp`
    #[default]
    Uvwt,
    /// `source target timestamp`, every edge has weight 1
    Uvt,
}

impl FromStr for ColumnMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "uvwt" => Ok(ColumnMode::Uvwt),
            "uvt" => Ok(ColumnMode::Uvt),
            other => Err(format!("unknown column mode {other:?} (expected uvwt or uvt)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct TemporalGraph {
    labels: Vec<String>,
    ids: HashMap<String, VertexId>,
    edges: Vec<TemporalEdge>,
    timestamps: Vec<Timestamp>,
    active: Vec<Vec<Timestamp>>,
    pair_offsets: Vec<usize>,
}

/// Incrementally collects vertices and edges; labels are interned in
/// first-appearance order.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    ids: HashMap<String, VertexId>,
    edges: Vec<TemporalEdge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: &str) -> VertexId {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }

    pub fn add_edge(&mut self, source: &str, target: &str, weight: u64, timestamp: Timestamp) {
        let source = self.add_vertex(source);
        let target = self.add_vertex(target);
        self.edges.push(TemporalEdge {
            source,
            target,
            weight,
            timestamp,
        });
    }

    /// Adds an edge between already interned vertices.
    ///
    /// Panics if either id has not been interned.
    pub fn add_edge_ids(&mut self, source: VertexId, target: VertexId, weight: u64, timestamp: Timestamp) {
        assert!(source < self.labels.len() && target < self.labels.len(), "vertex id out of range");
        self.edges.push(TemporalEdge {
            source,
            target,
            weight,
            timestamp,
        });
    }

    pub fn build(self) -> TemporalGraph {
        let n = self.labels.len();
        let mut timestamps: Vec<Timestamp> = self.edges.iter().map(|e| e.timestamp).collect();
        timestamps.sort_unstable();
        timestamps.dedup();

        let mut active = vec![Vec::new(); n];
        for e in &self.edges {
            active[e.source].push(e.timestamp);
            active[e.target].push(e.timestamp);
        }
        for list in &mut active {
            list.sort_unstable();
            list.dedup();
        }

        let mut pair_offsets = Vec::with_capacity(n + 1);
        let mut total = 0;
        pair_offsets.push(0);
        for list in &active {
            total += list.len();
            pair_offsets.push(total);
        }

        TemporalGraph {
            labels: self.labels,
            ids: self.ids,
            edges: self.edges,
            timestamps,
            active,
            pair_offsets,
        }
    }
}

impl TemporalGraph {
    /// Builds a graph over vertices labelled `"0".."n-1"` from `(u, v, w, t)` tuples.
    pub fn from_indexed_edges(vertex_count: usize, edges: &[(VertexId, VertexId, u64, Timestamp)]) -> Self {
        let mut builder = GraphBuilder::new();
        for v in 0..vertex_count {
            builder.add_vertex(&v.to_string());
        }
        for &(u, v, w, t) in edges {
            builder.add_edge_ids(u, v, w, t);
        }
        builder.build()
    }

    /// Parses a whitespace-separated edge list. Blank lines and lines starting
    /// with `#` are skipped.
    pub fn parse_edge_list<R: BufRead>(reader: R, mode: ColumnMode) -> Result<Self> {
        Self::parse_edge_list_binned(reader, mode, 1)
    }

    /// Like [`parse_edge_list`](Self::parse_edge_list), but maps every
    /// timestamp `t` to `t.div_euclid(bin)`.
    pub fn parse_edge_list_binned<R: BufRead>(reader: R, mode: ColumnMode, bin: i64) -> Result<Self> {
        if bin < 1 {
            return Err(Error::InvalidArgument(format!("bin divisor must be positive, got {bin}")));
        }
        let mut builder = GraphBuilder::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let expected = match mode {
                ColumnMode::Uvwt => 4,
                ColumnMode::Uvt => 3,
            };
            if fields.len() != expected {
                return Err(Error::parse(
                    line_no,
                    format!("expected {expected} columns, found {}", fields.len()),
                ));
            }
            let (weight, ts_field) = match mode {
                ColumnMode::Uvwt => {
                    let w: i64 = fields[2]
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("non-integer weight {:?}", fields[2])))?;
                    if w < 0 {
                        return Err(Error::parse(line_no, format!("negative weight {w}")));
                    }
                    (w as u64, fields[3])
                }
                ColumnMode::Uvt => (1, fields[2]),
            };
            let t: Timestamp = ts_field
                .parse()
                .map_err(|_| Error::parse(line_no, format!("non-integer timestamp {ts_field:?}")))?;
            builder.add_edge(fields[0], fields[1], weight, t.div_euclid(bin));
        }
        Ok(builder.build())
    }

    /// Writes the graph in `uvwt` format, one edge per line, in edge order.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.edges {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                self.labels[e.source], self.labels[e.target], e.weight, e.timestamp
            )?;
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.ids.get(label).copied()
    }

    /// Sorted distinct timestamps.
    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    /// Sorted distinct timestamps at which `v` has an incident edge.
    pub fn active_timestamps(&self, v: VertexId) -> &[Timestamp] {
        &self.active[v]
    }

    pub fn active_pair_count(&self) -> usize {
        *self.pair_offsets.last().unwrap_or(&0)
    }

    /// Dense index of the active pair `(v, t)`, if `v` is active at `t`.
    /// Pairs are numbered vertex-major, then by time.
    pub fn pair_index(&self, v: VertexId, t: Timestamp) -> Option<usize> {
        self.active[v]
            .binary_search(&t)
            .ok()
            .map(|i| self.pair_offsets[v] + i)
    }

    /// Index of the first active pair of `v`; pairs of `v` are contiguous.
    pub fn pair_offset(&self, v: VertexId) -> usize {
        self.pair_offsets[v]
    }

    /// All `(v, t)` such that some edge at time `t` touches `v`, ordered by
    /// pair index.
    pub fn active_pairs(&self) -> Vec<(VertexId, Timestamp)> {
        self.active
            .iter()
            .enumerate()
            .flat_map(|(v, ts)| ts.iter().map(move |&t| (v, t)))
            .collect()
    }

    /// The static graph of all edges at time `t`, over the same vertex table.
    pub fn snapshot(&self, t: Timestamp) -> Result<TemporalGraph> {
        if self.timestamps.binary_search(&t).is_err() {
            return Err(Error::UnknownTimestamp(t));
        }
        let mut builder = GraphBuilder {
            labels: self.labels.clone(),
            ids: self.ids.clone(),
            edges: Vec::new(),
        };
        builder.edges = self.edges.iter().filter(|e| e.timestamp == t).copied().collect();
        Ok(builder.build())
    }

    /// Sorted timestamps of the edges incident to `label`, one entry per edge.
    pub fn incident_timestamps(&self, label: &str) -> Result<Vec<Timestamp>> {
        let v = self
            .vertex_id(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
        Ok(self.incident_timestamps_of(v))
    }

    pub fn incident_timestamps_of(&self, v: VertexId) -> Vec<Timestamp> {
        let mut out: Vec<Timestamp> = self
            .edges
            .iter()
            .filter(|e| e.source == v || e.target == v)
            .map(|e| e.timestamp)
            .collect();
        out.sort_unstable();
        out
    }
}

impl PartialEq for TemporalGraph {
    /// Same vertex table and the same multiset of edges.
    fn eq(&self, other: &Self) -> bool {
        if self.labels != other.labels {
            return false;
        }
        let mut a = self.edges.clone();
        let mut b = other.edges.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl Eq for TemporalGraph {}
