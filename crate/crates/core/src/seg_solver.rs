//! Alternating heuristic for segmented agony.
//!
//! Finding the best segmentation is NP-hard, but both halves of it are exact:
//! with change points fixed the before/after ranks come from
//! [`tau_to_gen`], and with rank pairs fixed the change points come from
//! [`ranks_to_gen`]. [`solve_seg`] alternates the two from median change
//! points until a round no longer lowers the score.

use crate::error::Result;
use crate::gen_agony::solve;
use crate::metrics::score;
use crate::reductions::{
    constant_penalty, extract_segmentation, extract_two_level, ranks_to_gen, tau_to_gen, RankSegmentation,
};
use crate::temporal_graph::{TemporalGraph, Timestamp};

pub const DEFAULT_MAX_ITERS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegState {
    pub segmentation: RankSegmentation,
    /// Change point per vertex used by the last rank optimization. Vertices
    /// that do not change keep the last change point they were given.
    pub change_points: Vec<Timestamp>,
    pub score: u64,
    /// Rounds run, including the final one that failed to improve.
    pub iterations: usize,
    /// Score after every half-step, in order.
    pub history: Vec<u64>,
}

/// Lower median of each vertex's incident edge timestamps (one entry per
/// edge). Vertices without edges get the smallest timestamp of the graph.
pub fn median_init(g: &TemporalGraph) -> Vec<Timestamp> {
    let fallback = g.timestamps().first().copied().unwrap_or(0);
    (0..g.vertex_count())
        .map(|v| {
            let ts = g.incident_timestamps_of(v);
            if ts.is_empty() {
                fallback
            } else {
                ts[(ts.len() - 1) / 2]
            }
        })
        .collect()
}

/// Optimal before/after ranks for fixed change points.
pub fn change2ranks(g: &TemporalGraph, tau: &[Timestamp], k: Option<u32>) -> Result<(RankSegmentation, u64)> {
    let red = tau_to_gen(g, tau, k);
    let sol = solve(&red.graph)?;
    let seg = extract_two_level(g, &sol.ranking, &red.nodes, tau);
    let s = score(g, &seg);
    debug_assert_eq!(s, sol.objective);
    Ok((seg, s))
}

/// Optimal change points for fixed before/after ranks.
pub fn ranks2change(g: &TemporalGraph, before: &[i64], after: &[i64]) -> Result<(RankSegmentation, u64)> {
    let red = ranks_to_gen(g, before, after);
    let sol = solve(&red.graph)?;
    let seg = extract_segmentation(g, &sol.ranking, &red.nodes, before, after)?;
    let s = score(g, &seg);
    debug_assert_eq!(s, sol.objective + constant_penalty(g, before, after));
    Ok((seg, s))
}

/// Runs the alternation from median change points for at most `max_iters`
/// rounds and returns the best segmentation found.
pub fn solve_seg(g: &TemporalGraph, k: Option<u32>, max_iters: usize) -> Result<SegState> {
    let max_iters = max_iters.max(1);
    let mut tau = median_init(g);
    let mut history = Vec::new();
    let mut best: Option<(RankSegmentation, Vec<Timestamp>, u64)> = None;
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        let (ranked, ranked_score) = change2ranks(g, &tau, k)?;
        history.push(ranked_score);
        let (changed, changed_score) = ranks2change(g, &ranked.before_ranks(), &ranked.after_ranks())?;
        history.push(changed_score);

        let round_tau = tau.clone();
        for (v, seg) in changed.segments().iter().enumerate() {
            if let Some(t) = seg.change_at {
                tau[v] = t;
            }
        }

        let (round_best, round_best_score, round_best_tau) = if changed_score < ranked_score {
            (changed, changed_score, tau.clone())
        } else {
            (ranked, ranked_score, round_tau)
        };
        let improved = best.as_ref().is_none_or(|(_, _, s)| round_best_score < *s);
        if !improved {
            break;
        }
        best = Some((round_best, round_best_tau, round_best_score));
    }

    let (segmentation, change_points, score) = best.expect("at least one round runs");
    Ok(SegState {
        segmentation,
        change_points,
        score,
        iterations,
        history,
    })
}
