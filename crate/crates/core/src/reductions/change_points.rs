//! Optimal change points for fixed rank pairs.
//!
//! Each vertex-time node gets a 0/1 label: 0 selects the lower of the vertex's
//! two ranks, 1 the higher. Hard arcs pin every label between `alpha` and
//! `omega = alpha + 1` and make labels monotone in time in the direction of
//! the rank change. An edge then costs one of four penalties depending on its
//! endpoint labels, and the penalty differences become arc capacities.

use super::{NodeLayout, NodeMap, RankSegmentation, Reduction, Segment};
use crate::error::{Error, Result};
use crate::gen_agony::{Capacity, GenGraph, GenRanking};
use crate::temporal_graph::{TemporalEdge, TemporalGraph};

/// The four possible penalties of one edge; `pXY` is the penalty when the
/// source takes label `X` and the target label `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PenaltyQuad {
    pub p00: u64,
    pub p01: u64,
    pub p10: u64,
    pub p11: u64,
}

impl PenaltyQuad {
    /// `source` and `target` are the `(low, high)` ranks of each endpoint.
    pub fn from_bounds(weight: u64, source: (i64, i64), target: (i64, i64)) -> Self {
        let p = |ru: i64, rv: i64| weight * (ru - rv + 1).max(0) as u64;
        PenaltyQuad {
            p00: p(source.0, target.0),
            p01: p(source.0, target.1),
            p10: p(source.1, target.0),
            p11: p(source.1, target.1),
        }
    }

    /// Capacity of the arc that charges a 0 label at the target.
    pub fn target_low_cost(&self) -> u64 {
        self.p00 - self.p01
    }

    /// Capacity of the arc that charges a 1 label at the source.
    pub fn source_high_cost(&self) -> u64 {
        self.p11 - self.p01
    }

    /// Capacity of the arc that charges source 1 with target 0.
    pub fn cross_cost(&self) -> u64 {
        let c = self.p10 as i128 - self.p00 as i128 - self.p11 as i128 + self.p01 as i128;
        assert!(c >= 0, "penalty quad {self:?} has a negative cross difference");
        c as u64
    }
}

fn bounds(r1: &[i64], r2: &[i64], v: usize) -> (i64, i64) {
    (r1[v].min(r2[v]), r1[v].max(r2[v]))
}

pub fn penalty_quad(edge: &TemporalEdge, r1: &[i64], r2: &[i64]) -> PenaltyQuad {
    PenaltyQuad::from_bounds(edge.weight, bounds(r1, r2, edge.source), bounds(r1, r2, edge.target))
}

/// Sum of `p01` over all edges: the part of the score no labeling can avoid.
pub fn constant_penalty(g: &TemporalGraph, r1: &[i64], r2: &[i64]) -> u64 {
    g.edges().iter().map(|e| penalty_quad(e, r1, r2).p01).sum()
}

/// Builds the change-point instance for rank pairs `(r1(v), r2(v))`, where
/// `r1` holds before the change and `r2` after.
pub fn ranks_to_gen(g: &TemporalGraph, r1: &[i64], r2: &[i64]) -> Reduction {
    assert_eq!(r1.len(), g.vertex_count());
    assert_eq!(r2.len(), g.vertex_count());
    let pairs = g.active_pair_count();
    let mut h = GenGraph::new(pairs + 2);
    let nodes = NodeMap {
        layout: NodeLayout::ActivePairs,
        vertex_count: g.vertex_count(),
        alpha: pairs,
        omega: pairs + 1,
    };
    let (alpha, omega) = (nodes.alpha, nodes.omega);

    for x in 0..pairs {
        h.add_arc(x, omega, Capacity::Infinite, 0);
        h.add_arc(alpha, x, Capacity::Infinite, 0);
    }
    h.add_arc(omega, alpha, Capacity::Infinite, -1);
    h.add_arc(alpha, omega, Capacity::Infinite, 1);

    for v in 0..g.vertex_count() {
        let first = g.pair_offset(v);
        let increasing = r2[v] >= r1[v];
        for i in first + 1..first + g.active_timestamps(v).len() {
            if increasing {
                h.add_arc(nodes.pair(i - 1), nodes.pair(i), Capacity::Infinite, 0);
            } else {
                h.add_arc(nodes.pair(i), nodes.pair(i - 1), Capacity::Infinite, 0);
            }
        }
    }

    let mut low_cost = vec![0u64; pairs];
    let mut high_cost = vec![0u64; pairs];
    let mut cross = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let quad = penalty_quad(e, r1, r2);
        let u = g.pair_index(e.source, e.timestamp).expect("active source");
        let v = g.pair_index(e.target, e.timestamp).expect("active target");
        low_cost[v] += quad.target_low_cost();
        high_cost[u] += quad.source_high_cost();
        cross.push((u, v, quad.cross_cost()));
    }
    for x in 0..pairs {
        h.add_arc(omega, nodes.pair(x), Capacity::Finite(low_cost[x]), 0);
        h.add_arc(nodes.pair(x), alpha, Capacity::Finite(high_cost[x]), 0);
    }
    for (u, v, c) in cross {
        h.add_arc(nodes.pair(u), nodes.pair(v), Capacity::Finite(c), 0);
    }
    Reduction { graph: h, nodes }
}

/// Turns the 0/1 labels of an optimal ranking into a segmentation. Each vertex
/// changes at the first active timestamp whose label differs from its first
/// label. Vertices without edges get rank 0.
pub fn extract_segmentation(
    g: &TemporalGraph,
    ranking: &GenRanking,
    nodes: &NodeMap,
    r1: &[i64],
    r2: &[i64],
) -> Result<RankSegmentation> {
    let base = ranking.rank(nodes.alpha);
    let mut segments = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let active = g.active_timestamps(v);
        if active.is_empty() {
            segments.push(Segment::constant(0));
            continue;
        }
        let (low, high) = bounds(r1, r2, v);
        let first = g.pair_offset(v);
        let labels: Vec<i64> = (0..active.len())
            .map(|i| ranking.rank(nodes.pair(first + i)) - base)
            .collect();
        if labels.iter().any(|&l| l != 0 && l != 1) {
            return Err(Error::Internal(format!("vertex {v} has a label outside {{0, 1}}")));
        }
        let expected_step = if r2[v] >= r1[v] { 1 } else { -1 };
        if labels.windows(2).any(|w| w[1] != w[0] && w[1] - w[0] != expected_step) {
            return Err(Error::Internal(format!("vertex {v} has non-monotone labels")));
        }
        let rank_of = |label: i64| low + (high - low) * label;
        let start = rank_of(labels[0]);
        let segment = match labels.iter().position(|&l| l != labels[0]) {
            Some(i) if rank_of(labels[i]) != start => Segment {
                before: start,
                after: rank_of(labels[i]),
                change_at: Some(active[i]),
            },
            _ => Segment::constant(start),
        };
        segments.push(segment);
    }
    Ok(RankSegmentation::new(segments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen_agony::solve;
    use crate::metrics::score;
    use crate::temporal_graph::ColumnMode;

    fn toy() -> TemporalGraph {
        TemporalGraph::parse_edge_list("u v 1 0\nv u 1 1\nu v 1 2".as_bytes(), ColumnMode::Uvwt).unwrap()
    }

    // Before/after ranks used in the worked change-point example.
    const R1: [i64; 2] = [0, 1];
    const R2: [i64; 2] = [2, 3];

    #[test]
    fn quads_of_toy_edges() {
        let g = toy();
        let q = |i: usize| {
            let p = penalty_quad(&g.edges()[i], &R1, &R2);
            (p.p00, p.p01, p.p10, p.p11)
        };
        assert_eq!(q(0), (0, 0, 2, 0));
        assert_eq!(q(1), (2, 0, 4, 2));
        assert_eq!(q(2), (0, 0, 2, 0));
    }

    #[test]
    fn equal_rank_pairs_collapse_quads() {
        let e = TemporalEdge {
            source: 0,
            target: 1,
            weight: 3,
            timestamp: 0,
        };
        let p = penalty_quad(&e, &[2, 1], &[2, 1]);
        assert!(p.p00 == p.p01 && p.p01 == p.p10 && p.p10 == p.p11);
        assert_eq!(p.p00, 6);
    }

    #[test]
    fn toy_instance_arc_weights() {
        let g = toy();
        let red = ranks_to_gen(&g, &R1, &R2);
        // pairs: u0 = 0, u1 = 1, u2 = 2, v0 = 3, v1 = 4, v2 = 5
        let (alpha, omega) = (red.nodes.alpha, red.nodes.omega);
        let cap = |tail: usize, head: usize| {
            let caps: Vec<Capacity> = red
                .graph
                .arcs()
                .iter()
                .filter(|a| a.tail == tail && a.head == head && !a.capacity.is_infinite())
                .map(|a| a.capacity)
                .collect();
            assert_eq!(caps.len(), 1, "arc {tail}->{head}");
            caps[0]
        };
        assert_eq!(cap(0, 3), Capacity::Finite(2));
        assert_eq!(cap(4, 1), Capacity::Finite(0));
        assert_eq!(cap(2, 5), Capacity::Finite(2));
        assert_eq!(cap(4, alpha), Capacity::Finite(2));
        assert_eq!(cap(omega, 1), Capacity::Finite(2));
        for x in [0, 2, 3, 5] {
            assert_eq!(cap(omega, x), Capacity::Finite(0));
            assert_eq!(cap(x, alpha), Capacity::Finite(0));
        }
    }

    #[test]
    fn toy_instance_optimum() {
        let g = toy();
        let red = ranks_to_gen(&g, &R1, &R2);
        let sol = solve(&red.graph).unwrap();
        assert_eq!(sol.objective, 0);
        let label = |x: usize| sol.ranking.rank(x) - sol.ranking.rank(red.nodes.alpha);
        // alpha, u0, v0, v1 low; u1, u2, v2, omega high
        assert_eq!([label(0), label(3), label(4)], [0, 0, 0]);
        assert_eq!([label(1), label(2), label(5), label(red.nodes.omega)], [1, 1, 1, 1]);

        let seg = extract_segmentation(&g, &sol.ranking, &red.nodes, &R1, &R2).unwrap();
        assert_eq!(
            seg.segment(0),
            Segment {
                before: 0,
                after: 2,
                change_at: Some(1)
            }
        );
        assert_eq!(
            seg.segment(1),
            Segment {
                before: 1,
                after: 3,
                change_at: Some(2)
            }
        );
        assert_eq!(score(&g, &seg), 0);
        assert_eq!(constant_penalty(&g, &R1, &R2), 0);
    }

    #[test]
    fn single_active_stamp_never_changes() {
        let g = TemporalGraph::parse_edge_list("a b 1 0\nb a 1 1".as_bytes(), ColumnMode::Uvwt).unwrap();
        let g2 = TemporalGraph::parse_edge_list("a b 1 0\nc a 1 1".as_bytes(), ColumnMode::Uvwt).unwrap();
        for (g, r1, r2) in [(&g, vec![1, 0], vec![0, 1]), (&g2, vec![1, 0, 3], vec![0, 4, 0])] {
            let red = ranks_to_gen(g, &r1, &r2);
            let sol = solve(&red.graph).unwrap();
            let seg = extract_segmentation(g, &sol.ranking, &red.nodes, &r1, &r2).unwrap();
            for v in 0..g.vertex_count() {
                if g.active_timestamps(v).len() == 1 {
                    assert_eq!(seg.segment(v).change_at, None);
                }
            }
            assert_eq!(score(g, &seg), sol.objective + constant_penalty(g, &r1, &r2));
        }
    }

    #[test]
    fn decreasing_pairs_change_downwards() {
        // a is high before and low after; the edges ask for exactly that.
        let g = TemporalGraph::parse_edge_list("b a 1 0\na b 1 1".as_bytes(), ColumnMode::Uvwt).unwrap();
        // Vertex 0 is b, vertex 1 is a.
        let r1 = [1, 2];
        let r2 = [1, 0];
        let red = ranks_to_gen(&g, &r1, &r2);
        let sol = solve(&red.graph).unwrap();
        let seg = extract_segmentation(&g, &sol.ranking, &red.nodes, &r1, &r2).unwrap();
        assert_eq!(
            seg.segment(1),
            Segment {
                before: 2,
                after: 0,
                change_at: Some(1)
            }
        );
        assert_eq!(score(&g, &seg), 0);
    }
}
