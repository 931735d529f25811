//! Scores and summary statistics of rank assignments.
//!
//! Fluctuation, maximum rank difference and change counts are measured over
//! each vertex's active timestamps. Ranks are piecewise constant between
//! active timestamps, so this equals the sum over all timestamps.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Duration;

use crate::reductions::RankLookup;
use crate::temporal_graph::{TemporalEdge, TemporalGraph, VertexId};

/// `w * max(0, r(u; t) - r(v; t) + 1)`
pub fn edge_penalty<R: RankLookup + ?Sized>(edge: &TemporalEdge, ranks: &R) -> u64 {
    let ru = ranks.rank(edge.source, edge.timestamp);
    let rv = ranks.rank(edge.target, edge.timestamp);
    edge.weight * (ru - rv + 1).max(0) as u64
}

pub fn score<R: RankLookup + ?Sized>(g: &TemporalGraph, ranks: &R) -> u64 {
    g.edges().iter().map(|e| edge_penalty(e, ranks)).sum()
}

fn active_ranks<R: RankLookup + ?Sized>(g: &TemporalGraph, ranks: &R, v: VertexId) -> Vec<i64> {
    g.active_timestamps(v).iter().map(|&t| ranks.rank(v, t)).collect()
}

/// Total absolute rank change of `v` between consecutive active timestamps.
pub fn flux<R: RankLookup + ?Sized>(g: &TemporalGraph, ranks: &R, v: VertexId) -> u64 {
    active_ranks(g, ranks, v)
        .windows(2)
        .map(|w| w[1].abs_diff(w[0]))
        .sum()
}

pub fn total_flux<R: RankLookup + ?Sized>(g: &TemporalGraph, ranks: &R) -> u64 {
    (0..g.vertex_count()).map(|v| flux(g, ranks, v)).sum()
}

pub fn max_diff<R: RankLookup + ?Sized>(g: &TemporalGraph, ranks: &R, v: VertexId) -> u64 {
    let rs = active_ranks(g, ranks, v);
    match (rs.iter().min(), rs.iter().max()) {
        (Some(lo), Some(hi)) => hi.abs_diff(*lo),
        _ => 0,
    }
}

pub fn change_count<R: RankLookup + ?Sized>(g: &TemporalGraph, ranks: &R, v: VertexId) -> u64 {
    active_ranks(g, ranks, v)
        .windows(2)
        .filter(|w| w[0] != w[1])
        .count() as u64
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunMeta {
    pub iterations: Option<usize>,
    pub runtime: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingStats {
    pub score: u64,
    pub num_distinct_ranks: usize,
    pub avg_flux: f64,
    pub avg_maxdiff: f64,
    pub avg_change_count: f64,
    pub iterations: Option<usize>,
    pub runtime_ms: u128,
}

/// Score plus per-vertex fluctuation statistics averaged over all vertices;
/// vertices with fewer than two active timestamps contribute zeros.
pub fn stats<R: RankLookup + ?Sized>(g: &TemporalGraph, ranks: &R, meta: RunMeta) -> RankingStats {
    let n = g.vertex_count();
    let distinct: BTreeSet<i64> = g.active_pairs().into_iter().map(|(v, t)| ranks.rank(v, t)).collect();
    let average = |f: &dyn Fn(VertexId) -> u64| {
        if n == 0 {
            0.0
        } else {
            (0..n).map(f).sum::<u64>() as f64 / n as f64
        }
    };
    RankingStats {
        score: score(g, ranks),
        num_distinct_ranks: distinct.len(),
        avg_flux: average(&|v| flux(g, ranks, v)),
        avg_maxdiff: average(&|v| max_diff(g, ranks, v)),
        avg_change_count: average(&|v| change_count(g, ranks, v)),
        iterations: meta.iterations,
        runtime_ms: meta.runtime.as_millis(),
    }
}

impl RankingStats {
    /// Writes `key<TAB>value` lines. `runtime_ms` is omitted when
    /// `with_runtime` is false so that records are reproducible.
    pub fn write_record<W: Write>(&self, mut out: W, with_runtime: bool) -> std::io::Result<()> {
        writeln!(out, "score\t{}", self.score)?;
        writeln!(out, "num_ranks\t{}", self.num_distinct_ranks)?;
        writeln!(out, "avg_flux\t{}", self.avg_flux)?;
        writeln!(out, "avg_maxdiff\t{}", self.avg_maxdiff)?;
        writeln!(out, "avg_change\t{}", self.avg_change_count)?;
        match self.iterations {
            Some(i) => writeln!(out, "iterations\t{i}")?,
            None => writeln!(out, "iterations\t-")?,
        }
        if with_runtime {
            writeln!(out, "runtime_ms\t{}", self.runtime_ms)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{RankAssignment, RankSegmentation, Segment};
    use crate::temporal_graph::ColumnMode;

    fn toy() -> TemporalGraph {
        TemporalGraph::parse_edge_list("u v 1 0\nv u 1 1\nu v 1 2".as_bytes(), ColumnMode::Uvwt).unwrap()
    }

    fn edge(weight: u64) -> TemporalEdge {
        TemporalEdge {
            source: 0,
            target: 1,
            weight,
            timestamp: 0,
        }
    }

    fn toy_segmentation() -> RankSegmentation {
        RankSegmentation::new(vec![
            Segment {
                before: 0,
                after: 2,
                change_at: Some(1),
            },
            Segment {
                before: 1,
                after: 3,
                change_at: Some(2),
            },
        ])
    }

    #[test]
    fn penalties() {
        assert_eq!(edge_penalty(&edge(1), &vec![0, 1]), 0);
        assert_eq!(edge_penalty(&edge(1), &vec![4, 4]), 1);
        assert_eq!(edge_penalty(&edge(3), &vec![2, 0]), 9);
    }

    #[test]
    fn scores() {
        let g = toy();
        assert_eq!(score(&g, &vec![0, 1]), 2);
        assert_eq!(score(&g, &toy_segmentation()), 0);
        assert_eq!(score(&TemporalGraph::default(), &Vec::<i64>::new()), 0);
    }

    #[test]
    fn flux_over_active_stamps() {
        let g = toy();
        assert_eq!(flux(&g, &vec![3, 1], 0), 0);
        let r = RankAssignment::from_entries(vec![vec![(0, 0), (1, 1), (2, 0)], vec![(0, 0), (1, 0), (2, 0)]]);
        assert_eq!(flux(&g, &r, 0), 2);
        assert_eq!(max_diff(&g, &r, 0), 1);
        assert_eq!(change_count(&g, &r, 0), 2);
        let seg = RankSegmentation::new(vec![
            Segment {
                before: 0,
                after: 3,
                change_at: Some(1),
            },
            Segment::constant(0),
        ]);
        assert_eq!(flux(&g, &seg, 0), 3);
        assert_eq!(max_diff(&g, &seg, 0), 3);
    }

    #[test]
    fn toy_segmentation_stats() {
        let g = toy();
        let s = stats(&g, &toy_segmentation(), RunMeta::default());
        assert_eq!(s.score, 0);
        assert_eq!(s.num_distinct_ranks, 4);
        assert_eq!(s.avg_change_count, 1.0);
        assert_eq!(s.avg_flux, 2.0);
        assert_eq!(s.avg_flux, s.avg_maxdiff);
    }

    #[test]
    fn constant_assignment_has_no_fluctuation() {
        let g = toy();
        let s = stats(&g, &RankAssignment::constant(&g, &[0, 1]), RunMeta::default());
        assert_eq!((s.avg_flux, s.avg_maxdiff, s.avg_change_count), (0.0, 0.0, 0.0));
        assert_eq!(s.score, 2);
        assert_eq!(s.num_distinct_ranks, 2);
    }

    #[test]
    fn record_format() {
        let g = toy();
        let s = stats(
            &g,
            &vec![0, 1],
            RunMeta {
                iterations: Some(3),
                runtime: Duration::from_millis(12),
            },
        );
        let mut buf = Vec::new();
        s.write_record(&mut buf, true).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "score\t2\nnum_ranks\t2\navg_flux\t0\navg_maxdiff\t0\navg_change\t0\niterations\t3\nruntime_ms\t12\n"
        );
    }
}
