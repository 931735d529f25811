//! Reductions from the temporal ranking problems to [`GenGraph`] instances,
//! and the inverse maps from generalized rankings back to temporal ranks.
//!
//! Every construction returns a [`Reduction`]: the instance plus a
//! [`NodeMap`] locating the vertex (or vertex-time) nodes and the two
//! auxiliary nodes `alpha` and `omega`. Extracted ranks are always measured
//! relative to `alpha`.

mod change_points;
mod fluctuation;
mod two_level;

pub use change_points::{constant_penalty, extract_segmentation, penalty_quad, ranks_to_gen, PenaltyQuad};
pub use fluctuation::{extract_fluc, extract_static, fluc_to_gen, static_to_gen};
pub use two_level::{extract_two_level, tau_to_gen};

use std::ops::Range;

use crate::gen_agony::{Capacity, GenGraph, NodeId};
use crate::temporal_graph::{TemporalGraph, Timestamp, VertexId};

/// Anything that yields a rank for a vertex at a time.
pub trait RankLookup {
    fn rank(&self, v: VertexId, t: Timestamp) -> i64;
}

/// Piecewise-constant ranks: per vertex, sorted `(timestamp, rank)` entries.
/// Between entries the latest earlier entry holds; before the first entry the
/// first rank holds. Vertices without entries have rank 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankAssignment {
    entries: Vec<Vec<(Timestamp, i64)>>,
}

impl RankAssignment {
    pub fn from_entries(mut entries: Vec<Vec<(Timestamp, i64)>>) -> Self {
        for list in &mut entries {
            list.sort_by_key(|&(t, _)| t);
        }
        RankAssignment { entries }
    }

    /// One rank per vertex, recorded at each of its active timestamps.
    pub fn constant(g: &TemporalGraph, ranks: &[i64]) -> Self {
        let entries = (0..g.vertex_count())
            .map(|v| g.active_timestamps(v).iter().map(|&t| (t, ranks[v])).collect())
            .collect();
        RankAssignment { entries }
    }

    /// Samples `lookup` at every active pair of `g`.
    pub fn from_lookup(g: &TemporalGraph, lookup: &impl RankLookup) -> Self {
        let entries = (0..g.vertex_count())
            .map(|v| g.active_timestamps(v).iter().map(|&t| (t, lookup.rank(v, t))).collect())
            .collect();
        RankAssignment { entries }
    }

    pub fn vertex_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self, v: VertexId) -> &[(Timestamp, i64)] {
        &self.entries[v]
    }
}

impl RankLookup for RankAssignment {
    fn rank(&self, v: VertexId, t: Timestamp) -> i64 {
        let list = match self.entries.get(v) {
            Some(list) if !list.is_empty() => list,
            _ => return 0,
        };
        let idx = list.partition_point(|&(ts, _)| ts <= t);
        list[idx.saturating_sub(1)].1
    }
}

/// The ranks of one vertex under a segmentation: `before` for `t < change_at`,
/// `after` from `change_at` on. `change_at == None` means no change, and then
/// `before == after`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub before: i64,
    pub after: i64,
    pub change_at: Option<Timestamp>,
}

impl Segment {
    pub fn constant(rank: i64) -> Self {
        Segment {
            before: rank,
            after: rank,
            change_at: None,
        }
    }

    pub fn rank_at(&self, t: Timestamp) -> i64 {
        match self.change_at {
            Some(tau) if t < tau => self.before,
            Some(_) => self.after,
            None => self.before,
        }
    }
}

/// A rank assignment in which each vertex changes rank at most once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankSegmentation {
    segments: Vec<Segment>,
}

impl RankSegmentation {
    pub fn new(segments: Vec<Segment>) -> Self {
        debug_assert!(segments
            .iter()
            .all(|s| s.change_at.is_some() || s.before == s.after));
        RankSegmentation { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, v: VertexId) -> Segment {
        self.segments[v]
    }

    pub fn before_ranks(&self) -> Vec<i64> {
        self.segments.iter().map(|s| s.before).collect()
    }

    pub fn after_ranks(&self) -> Vec<i64> {
        self.segments.iter().map(|s| s.after).collect()
    }
}

impl RankLookup for RankSegmentation {
    fn rank(&self, v: VertexId, t: Timestamp) -> i64 {
        self.segments[v].rank_at(t)
    }
}

impl RankLookup for [i64] {
    fn rank(&self, v: VertexId, _t: Timestamp) -> i64 {
        self[v]
    }
}

impl RankLookup for Vec<i64> {
    fn rank(&self, v: VertexId, _t: Timestamp) -> i64 {
        self[v]
    }
}

/// How temporal objects are laid out on the nodes of a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeLayout {
    /// Node `v` for vertex `v`.
    Vertices,
    /// Node `i` for the active pair with index `i`
    /// (see [`TemporalGraph::pair_index`]).
    ActivePairs,
    /// Node `v` for the copy before the change point, `n + v` after.
    TwoCopies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeMap {
    pub layout: NodeLayout,
    pub vertex_count: usize,
    pub alpha: NodeId,
    pub omega: NodeId,
}

impl NodeMap {
    pub fn vertex(&self, v: VertexId) -> NodeId {
        debug_assert_eq!(self.layout, NodeLayout::Vertices);
        v
    }

    pub fn pair(&self, pair_index: usize) -> NodeId {
        debug_assert_eq!(self.layout, NodeLayout::ActivePairs);
        pair_index
    }

    pub fn before_copy(&self, v: VertexId) -> NodeId {
        debug_assert_eq!(self.layout, NodeLayout::TwoCopies);
        v
    }

    pub fn after_copy(&self, v: VertexId) -> NodeId {
        debug_assert_eq!(self.layout, NodeLayout::TwoCopies);
        self.vertex_count + v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub graph: GenGraph,
    pub nodes: NodeMap,
}

/// Confines `nodes` to `[rank(alpha), rank(alpha) + k - 1]`.
fn add_level_cap(h: &mut GenGraph, alpha: NodeId, omega: NodeId, nodes: Range<NodeId>, k: u32) {
    for x in nodes {
        h.add_arc(alpha, x, Capacity::Infinite, 0);
        h.add_arc(x, omega, Capacity::Infinite, 0);
    }
    h.add_arc(omega, alpha, Capacity::Infinite, 1 - i64::from(k));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_lookup_is_piecewise_constant() {
        let r = RankAssignment::from_entries(vec![vec![(5, 2), (1, 7)], vec![]]);
        assert_eq!(r.rank(0, 0), 7);
        assert_eq!(r.rank(0, 1), 7);
        assert_eq!(r.rank(0, 4), 7);
        assert_eq!(r.rank(0, 5), 2);
        assert_eq!(r.rank(0, 100), 2);
        assert_eq!(r.rank(1, 3), 0);
    }

    #[test]
    fn segment_switches_at_change_point() {
        let s = Segment {
            before: 1,
            after: 4,
            change_at: Some(10),
        };
        assert_eq!(s.rank_at(9), 1);
        assert_eq!(s.rank_at(10), 4);
        assert_eq!(Segment::constant(3).rank_at(-100), 3);
    }
}
