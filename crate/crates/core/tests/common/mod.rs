#![allow(dead_code)]

use temporal_agony::gen_agony::solve;
use temporal_agony::metrics::{score, total_flux};
use temporal_agony::reductions::{extract_fluc, extract_static, fluc_to_gen, static_to_gen};
use temporal_agony::{ColumnMode, RankAssignment, TemporalGraph};

pub const TOY: &str = "u v 1 0\nv u 1 1\nu v 1 2\n";

pub fn toy() -> TemporalGraph {
    TemporalGraph::parse_edge_list(TOY.as_bytes(), ColumnMode::Uvwt).unwrap()
}

/// Static optimum through the flow solver, checked against the extracted ranking.
pub fn static_opt(g: &TemporalGraph, k: Option<u32>) -> (RankAssignment, u64) {
    let red = static_to_gen(g, k);
    let sol = solve(&red.graph).expect("level caps >= 1 are feasible");
    let ranks = extract_static(g, &sol.ranking, &red.nodes);
    assert_eq!(score(g, &ranks), sol.objective);
    (ranks, sol.objective)
}

/// Fluc optimum `score + lambda * flux`, checked against the extracted ranking.
pub fn fluc_opt(g: &TemporalGraph, lambda: u64, k: Option<u32>) -> (RankAssignment, u64) {
    let red = fluc_to_gen(g, lambda, k);
    let sol = solve(&red.graph).expect("level caps >= 1 are feasible");
    let ranks = extract_fluc(g, &sol.ranking, &red.nodes);
    assert_eq!(score(g, &ranks) + lambda * total_flux(g, &ranks), sol.objective);
    (ranks, sol.objective)
}
