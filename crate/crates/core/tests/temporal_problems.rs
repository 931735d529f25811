mod common;

use proptest::prelude::*;
use temporal_agony::metrics::{score, stats, total_flux, RunMeta};
use temporal_agony::oracle::{brute_change2ranks, brute_fluc, brute_ranks2change, brute_seg, brute_static};
use temporal_agony::reductions::penalty_quad;
use temporal_agony::seg_solver::{change2ranks, ranks2change, solve_seg, DEFAULT_MAX_ITERS};
use temporal_agony::{TemporalGraph, Timestamp};

use common::{fluc_opt, static_opt};

fn temporal_graph(max_vertices: usize, max_timestamps: i64, max_edges: usize) -> impl Strategy<Value = TemporalGraph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, 1u64..=3, 0..max_timestamps), 1..=max_edges)
            .prop_map(move |edges| TemporalGraph::from_indexed_edges(n, &edges))
    })
}

fn tiny() -> impl Strategy<Value = TemporalGraph> {
    temporal_graph(3, 3, 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn static_matches_brute_force(g in tiny(), k in 1u32..=3) {
        prop_assert_eq!(static_opt(&g, Some(k)).1, brute_static(&g, k).unwrap());
    }

    #[test]
    fn fluc_matches_brute_force(g in tiny(), k in 1u32..=3, lambda in 0u64..=3) {
        prop_assert_eq!(fluc_opt(&g, lambda, Some(k)).1, brute_fluc(&g, lambda, k).unwrap());
    }

    #[test]
    fn change2ranks_matches_brute_force(g in tiny(), k in 1u32..=3, picks in prop::collection::vec(0usize..4, 3)) {
        let ts = g.timestamps();
        let tau: Vec<Timestamp> = (0..g.vertex_count())
            .map(|v| ts.get(picks[v]).copied().unwrap_or(Timestamp::MAX))
            .collect();
        let (seg, s) = change2ranks(&g, &tau, Some(k)).unwrap();
        prop_assert_eq!(s, brute_change2ranks(&g, &tau, k).unwrap());
        for segment in seg.segments() {
            prop_assert!(segment.before >= 0 && segment.before < k as i64);
            prop_assert!(segment.after >= 0 && segment.after < k as i64);
        }
    }

    #[test]
    fn ranks2change_matches_brute_force(
        g in tiny(),
        r1 in prop::collection::vec(-2i64..=3, 3),
        r2 in prop::collection::vec(-2i64..=3, 3),
    ) {
        let n = g.vertex_count();
        let (seg, s) = ranks2change(&g, &r1[..n], &r2[..n]).unwrap();
        prop_assert_eq!(s, brute_ranks2change(&g, &r1[..n], &r2[..n]).unwrap());
        for (v, segment) in seg.segments().iter().enumerate() {
            if !g.active_timestamps(v).is_empty() {
                let bounds = [r1[v], r2[v]];
                prop_assert!(bounds.contains(&segment.before) && bounds.contains(&segment.after));
            }
        }
    }

    #[test]
    fn penalty_quads_are_submodular(w in 0u64..20, a in -6i64..6, b in -6i64..6, c in -6i64..6, d in -6i64..6) {
        let edge = temporal_agony::TemporalEdge { source: 0, target: 1, weight: w, timestamp: 0 };
        let q = penalty_quad(&edge, &[a, c], &[b, d]);
        prop_assert!(q.p11 + q.p00 <= q.p10 + q.p01);
        prop_assert!(q.p01 <= q.p00 && q.p01 <= q.p11);
    }

    #[test]
    fn heuristic_is_monotone_and_sandwiched(g in temporal_graph(5, 4, 10), k in 1u32..=4) {
        let state = solve_seg(&g, Some(k), DEFAULT_MAX_ITERS).unwrap();
        prop_assert!(state.history.windows(2).all(|w| w[1] <= w[0]), "{:?}", state.history);
        prop_assert!(state.iterations <= DEFAULT_MAX_ITERS);
        prop_assert_eq!(score(&g, &state.segmentation), state.score);
        prop_assert!(state.score >= fluc_opt(&g, 0, Some(k)).1);
        prop_assert!(state.score <= static_opt(&g, Some(k)).1);
        let s = stats(&g, &state.segmentation, RunMeta::default());
        prop_assert_eq!(s.avg_flux, s.avg_maxdiff);
        prop_assert!(s.avg_change_count <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn heuristic_is_bounded_by_exhaustive_segmentation(g in temporal_graph(3, 3, 5), k in 1u32..=2) {
        let state = solve_seg(&g, Some(k), DEFAULT_MAX_ITERS).unwrap();
        prop_assert!(state.score >= brute_seg(&g, k).unwrap());
    }

    #[test]
    fn lambda_sweep_is_monotone(g in temporal_graph(6, 5, 15)) {
        let mut previous: Option<(u64, u64)> = None;
        for lambda in 0..=4 {
            let (ranks, _) = fluc_opt(&g, lambda, None);
            let current = (score(&g, &ranks), total_flux(&g, &ranks));
            if let Some((s, f)) = previous {
                prop_assert!(current.0 >= s && current.1 <= f, "lambda {}: {:?} after {:?}", lambda, current, (s, f));
            }
            previous = Some(current);
        }
    }

    #[test]
    fn large_lambda_gives_static(g in temporal_graph(6, 5, 15)) {
        let best = static_opt(&g, None).1;
        let (ranks, value) = fluc_opt(&g, best + 1, None);
        prop_assert_eq!(value, best);
        prop_assert_eq!(total_flux(&g, &ranks), 0);
    }

    #[test]
    fn zero_lambda_splits_into_snapshots(g in temporal_graph(6, 5, 15)) {
        let sum: u64 = g.timestamps().iter().map(|&t| static_opt(&g.snapshot(t).unwrap(), None).1).sum();
        prop_assert_eq!(fluc_opt(&g, 0, None).1, sum);
    }
}
