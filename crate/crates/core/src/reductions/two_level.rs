use super::{add_level_cap, NodeLayout, NodeMap, RankSegmentation, Reduction, Segment};
use crate::gen_agony::{Capacity, GenGraph, GenRanking};
use crate::temporal_graph::{TemporalGraph, Timestamp};

/// Instance for optimal ranks under fixed change points: each vertex has a
/// copy for `t < tau(v)` and a copy for `t >= tau(v)`, and every temporal
/// edge is routed between the copies its timestamp selects.
pub fn tau_to_gen(g: &TemporalGraph, tau: &[Timestamp], k: Option<u32>) -> Reduction {
    assert_eq!(tau.len(), g.vertex_count(), "one change point per vertex");
    let n = g.vertex_count();
    let mut h = GenGraph::new(2 * n + 2);
    let nodes = NodeMap {
        layout: NodeLayout::TwoCopies,
        vertex_count: n,
        alpha: 2 * n,
        omega: 2 * n + 1,
    };
    let copy = |v: usize, t: Timestamp| {
        if t < tau[v] {
            nodes.before_copy(v)
        } else {
            nodes.after_copy(v)
        }
    };
    for e in g.edges() {
        h.add_arc(
            copy(e.source, e.timestamp),
            copy(e.target, e.timestamp),
            Capacity::Finite(e.weight),
            1,
        );
    }
    if let Some(k) = k {
        add_level_cap(&mut h, nodes.alpha, nodes.omega, 0..2 * n, k);
    }
    Reduction { graph: h, nodes }
}

/// Reads `(before, after)` ranks off the two copies, relative to `alpha`.
///
/// A copy that no active timestamp selects is unconstrained; its rank is
/// replaced by the other copy's so that the segmentation only reports changes
/// that actually happen. Vertices without edges get rank 0.
pub fn extract_two_level(
    g: &TemporalGraph,
    ranking: &GenRanking,
    nodes: &NodeMap,
    tau: &[Timestamp],
) -> RankSegmentation {
    let base = ranking.rank(nodes.alpha);
    let segments = (0..g.vertex_count())
        .map(|v| {
            let active = g.active_timestamps(v);
            let used_before = active.first().is_some_and(|&t| t < tau[v]);
            let used_after = active.last().is_some_and(|&t| t >= tau[v]);
            let mut before = ranking.rank(nodes.before_copy(v)) - base;
            let mut after = ranking.rank(nodes.after_copy(v)) - base;
            match (used_before, used_after) {
                (false, false) => return Segment::constant(0),
                (false, true) => before = after,
                (true, false) => after = before,
                (true, true) => {}
            }
            if before == after {
                Segment::constant(before)
            } else {
                Segment {
                    before,
                    after,
                    change_at: Some(tau[v]),
                }
            }
        })
        .collect();
    RankSegmentation::new(segments)
}
