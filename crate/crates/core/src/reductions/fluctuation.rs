use std::collections::BTreeMap;

use super::{add_level_cap, NodeLayout, NodeMap, RankAssignment, Reduction};
use crate::gen_agony::{Capacity, GenGraph, GenRanking};
use crate::temporal_graph::TemporalGraph;

/// Static agony instance: one node per vertex, parallel edges grouped over
/// all timestamps into a single arc `(u, v, sum of weights, 1)`.
pub fn static_to_gen(g: &TemporalGraph, k: Option<u32>) -> Reduction {
    let n = g.vertex_count();
    let mut h = GenGraph::new(n + 2);
    let nodes = NodeMap {
        layout: NodeLayout::Vertices,
        vertex_count: n,
        alpha: n,
        omega: n + 1,
    };

    let mut grouped: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for e in g.edges() {
        *grouped.entry((e.source, e.target)).or_default() += e.weight;
    }
    for ((u, v), w) in grouped {
        h.add_arc(u, v, Capacity::Finite(w), 1);
    }
    if let Some(k) = k {
        add_level_cap(&mut h, nodes.alpha, nodes.omega, 0..n, k);
    }
    Reduction { graph: h, nodes }
}

/// Constant-in-time ranks `rank(v) - rank(alpha)`. Vertices without edges get 0.
pub fn extract_static(g: &TemporalGraph, ranking: &GenRanking, nodes: &NodeMap) -> RankAssignment {
    let base = ranking.rank(nodes.alpha);
    let ranks: Vec<i64> = (0..g.vertex_count())
        .map(|v| {
            if g.active_timestamps(v).is_empty() {
                0
            } else {
                ranking.rank(nodes.vertex(v)) - base
            }
        })
        .collect();
    RankAssignment::constant(g, &ranks)
}

/// Fluctuation-penalized instance: one node per active pair, one arc
/// `(u_t, v_t, w, 1)` per temporal edge, and a pair of `(lambda, 0)` arcs
/// between consecutive active nodes of each vertex.
pub fn fluc_to_gen(g: &TemporalGraph, lambda: u64, k: Option<u32>) -> Reduction {
    let pairs = g.active_pair_count();
    let mut h = GenGraph::new(pairs + 2);
    let nodes = NodeMap {
        layout: NodeLayout::ActivePairs,
        vertex_count: g.vertex_count(),
        alpha: pairs,
        omega: pairs + 1,
    };

    for e in g.edges() {
        let u = g.pair_index(e.source, e.timestamp).expect("edge endpoints are active");
        let v = g.pair_index(e.target, e.timestamp).expect("edge endpoints are active");
        h.add_arc(nodes.pair(u), nodes.pair(v), Capacity::Finite(e.weight), 1);
    }
    for v in 0..g.vertex_count() {
        let first = g.pair_offset(v);
        for i in first + 1..first + g.active_timestamps(v).len() {
            h.add_arc(nodes.pair(i - 1), nodes.pair(i), Capacity::Finite(lambda), 0);
            h.add_arc(nodes.pair(i), nodes.pair(i - 1), Capacity::Finite(lambda), 0);
        }
    }
    if let Some(k) = k {
        add_level_cap(&mut h, nodes.alpha, nodes.omega, 0..pairs, k);
    }
    Reduction { graph: h, nodes }
}

/// Ranks `rank(v_t) - rank(alpha)` at every active pair.
pub fn extract_fluc(g: &TemporalGraph, ranking: &GenRanking, nodes: &NodeMap) -> RankAssignment {
    let base = ranking.rank(nodes.alpha);
    let entries = (0..g.vertex_count())
        .map(|v| {
            let first = g.pair_offset(v);
            g.active_timestamps(v)
                .iter()
                .enumerate()
                .map(|(i, &t)| (t, ranking.rank(nodes.pair(first + i)) - base))
                .collect()
        })
        .collect();
    RankAssignment::from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen_agony::{solve, Arc};
    use crate::metrics::{score, total_flux};
    use crate::reductions::RankLookup;
    use crate::temporal_graph::ColumnMode;

    fn toy() -> TemporalGraph {
        TemporalGraph::parse_edge_list("u v 1 0\nv u 1 1\nu v 1 2".as_bytes(), ColumnMode::Uvwt).unwrap()
    }

    fn arc(tail: usize, head: usize, capacity: Capacity, offset: i64) -> Arc {
        Arc {
            tail,
            head,
            capacity,
            offset,
        }
    }

    #[test]
    fn static_construction_of_toy() {
        let red = static_to_gen(&toy(), Some(2));
        let (u, v, a, w) = (0, 1, 2, 3);
        assert_eq!(
            red.graph.arcs(),
            &[
                arc(u, v, Capacity::Finite(2), 1),
                arc(v, u, Capacity::Finite(1), 1),
                arc(a, u, Capacity::Infinite, 0),
                arc(u, w, Capacity::Infinite, 0),
                arc(a, v, Capacity::Infinite, 0),
                arc(v, w, Capacity::Infinite, 0),
                arc(w, a, Capacity::Infinite, -1),
            ]
        );
        let unbounded = static_to_gen(&toy(), None);
        assert_eq!(unbounded.graph.arcs(), &red.graph.arcs()[..2]);
    }

    #[test]
    fn static_of_empty_graph_is_only_the_gadget() {
        let g = TemporalGraph::default();
        let red = static_to_gen(&g, Some(3));
        assert_eq!(red.graph.node_count(), 2);
        assert_eq!(red.graph.arcs(), &[arc(1, 0, Capacity::Infinite, -2)]);
    }

    #[test]
    fn static_toy_optimum() {
        // Brute force over the four rankings in {0,1}^2: (u,v) = (0,1) pays
        // only the middle edge, 1 * (1 - 0 + 1) = 2.
        let g = toy();
        let red = static_to_gen(&g, Some(2));
        let sol = solve(&red.graph).unwrap();
        assert_eq!(sol.objective, 2);
        let r = extract_static(&g, &sol.ranking, &red.nodes);
        assert_eq!((r.rank(0, 0), r.rank(1, 0)), (0, 1));
        assert_eq!(score(&g, &r), 2);
    }

    #[test]
    fn single_edge_and_self_loop() {
        let g = TemporalGraph::parse_edge_list("a b 1 0".as_bytes(), ColumnMode::Uvwt).unwrap();
        let red = static_to_gen(&g, None);
        let sol = solve(&red.graph).unwrap();
        let r = extract_static(&g, &sol.ranking, &red.nodes);
        assert_eq!((r.rank(0, 0), r.rank(1, 0)), (0, 1));
        assert_eq!(score(&g, &r), 0);

        let g = TemporalGraph::parse_edge_list("a a 4 0\na b 1 0".as_bytes(), ColumnMode::Uvwt).unwrap();
        for k in [None, Some(1), Some(3)] {
            let red = static_to_gen(&g, k);
            let sol = solve(&red.graph).unwrap();
            let r = extract_static(&g, &sol.ranking, &red.nodes);
            let expected = if k == Some(1) { 5 } else { 4 };
            assert_eq!(score(&g, &r), expected);
            assert_eq!(sol.objective, expected);
        }
    }

    #[test]
    fn fluc_construction_of_toy() {
        let g = toy();
        let red = fluc_to_gen(&g, 1, None);
        assert_eq!(red.graph.node_count(), 8);
        let (a1, a2): (Vec<&Arc>, Vec<&Arc>) = red.graph.arcs().iter().partition(|a| a.offset == 1);
        assert_eq!(a1.len(), 3);
        assert_eq!(a2.len(), 8);
        assert!(a2.iter().all(|a| a.capacity == Capacity::Finite(1)));
        // u_0 -> v_0, v_1 -> u_1, u_2 -> v_2 with pairs u = 0..3, v = 3..6.
        let a1: Vec<(usize, usize)> = a1.iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(a1, vec![(0, 3), (4, 1), (2, 5)]);
    }

    #[test]
    fn vertex_active_once_has_no_smoothing_arcs() {
        let g = TemporalGraph::parse_edge_list("a b 1 0\na c 1 1".as_bytes(), ColumnMode::Uvwt).unwrap();
        let red = fluc_to_gen(&g, 2, None);
        let smoothing: Vec<_> = red.graph.arcs().iter().filter(|a| a.offset == 0).collect();
        // only a has two active stamps
        assert_eq!(smoothing.len(), 2);
    }

    #[test]
    fn fluc_toy_lambda_values() {
        // lambda = 1: brute force over {0..3}^6 gives 2 with constant ranks.
        // lambda = 0: each snapshot is a single edge, so 0.
        // lambda = 3 exceeds the static optimum: 2 with no fluctuation.
        let g = toy();
        for (lambda, expected, flux) in [(1, 2, None), (0, 0, None), (3, 2, Some(0))] {
            let red = fluc_to_gen(&g, lambda, None);
            let sol = solve(&red.graph).unwrap();
            assert_eq!(sol.objective, expected, "lambda {lambda}");
            let r = extract_fluc(&g, &sol.ranking, &red.nodes);
            let f = total_flux(&g, &r);
            assert_eq!(score(&g, &r) + lambda * f, expected);
            if let Some(flux) = flux {
                assert_eq!(f, flux);
            }
        }
    }
}
