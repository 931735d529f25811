//! Generalized static agony.
//!
//! Given arcs `(u, v, c, b)` with capacity `c >= 0` (possibly infinite) and an
//! integer offset `b`, find integer ranks minimizing
//!
//! ```text
//! sum over arcs of max(c * (rank(u) - rank(v) + b), 0)
//! ```
//!
//! with `0 * inf = 0`, so an infinite arc is the hard constraint
//! `rank(u) + b <= rank(v)`. The problem is the LP dual of a capacitated
//! circulation with per-unit cost `-b`; [`solve`] computes an exact min-cost
//! circulation and reads the ranks off the shortest-path potentials of the
//! optimal residual network.

mod circulation;

use std::fmt;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(u64),
    Infinite,
}

impl Capacity {
    pub fn is_infinite(self) -> bool {
        matches!(self, Capacity::Infinite)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: Capacity,
    pub offset: i64,
}

/// A static instance `(W, A)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenGraph {
    node_count: usize,
    arcs: Vec<Arc>,
}

impl GenGraph {
    pub fn new(node_count: usize) -> Self {
        GenGraph {
            node_count,
            arcs: Vec::new(),
        }
    }

    pub fn add_node(&mut self) -> NodeId {
        self.node_count += 1;
        self.node_count - 1
    }

    pub fn add_arc(&mut self, tail: NodeId, head: NodeId, capacity: Capacity, offset: i64) {
        assert!(
            tail < self.node_count && head < self.node_count,
            "arc ({tail}, {head}) references a node outside 0..{}",
            self.node_count
        );
        self.arcs.push(Arc {
            tail,
            head,
            capacity,
            offset,
        });
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }
}

/// Objective value of a ranking; `Infinite` when a hard constraint is violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Objective {
    Finite(u64),
    Infinite,
}

impl Objective {
    pub fn finite(self) -> Option<u64> {
        match self {
            Objective::Finite(v) => Some(v),
            Objective::Infinite => None,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Finite(v) => write!(f, "{v}"),
            Objective::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenRanking {
    ranks: Vec<i64>,
}

impl GenRanking {
    pub fn new(ranks: Vec<i64>) -> Self {
        GenRanking { ranks }
    }

    pub fn rank(&self, node: NodeId) -> i64 {
        self.ranks[node]
    }

    pub fn ranks(&self) -> &[i64] {
        &self.ranks
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSolution {
    pub ranking: GenRanking,
    pub objective: u64,
}

/// A cycle of infinite-capacity arcs whose offsets sum to a positive value;
/// no ranking can satisfy all of its constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibleCycle {
    /// Indices into [`GenGraph::arcs`], in cycle order.
    pub arcs: Vec<usize>,
    pub offset: i64,
}

impl fmt::Display for InfeasibleCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cycle over arcs {:?} with total offset {}", self.arcs, self.offset)
    }
}

/// Shortest distances over the hard-constraint arcs (cost `-b`) from a virtual
/// source attached to every node, or a positive-offset cycle.
fn hard_constraint_potentials(h: &GenGraph) -> std::result::Result<Vec<i64>, InfeasibleCycle> {
    let n = h.node_count();
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in h.arcs().iter().enumerate() {
        if a.capacity.is_infinite() {
            if a.tail == a.head && a.offset > 0 {
                return Err(InfeasibleCycle {
                    arcs: vec![i],
                    offset: a.offset,
                });
            }
            out_arcs[a.tail].push(i);
        }
    }

    // Queue-based Bellman-Ford; a path with n arcs means a negative cycle.
    let mut dist = vec![0i64; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut hops = vec![0usize; n];
    let mut in_queue = vec![true; n];
    let mut queue: std::collections::VecDeque<usize> = (0..n).collect();
    while let Some(u) = queue.pop_front() {
        in_queue[u] = false;
        for &i in &out_arcs[u] {
            let a = h.arcs()[i];
            let cand = dist[u] - a.offset;
            if cand < dist[a.head] {
                dist[a.head] = cand;
                pred[a.head] = Some(i);
                hops[a.head] = hops[u] + 1;
                if hops[a.head] >= n.max(1) {
                    return Err(extract_cycle(h, &pred, a.head));
                }
                if !in_queue[a.head] {
                    in_queue[a.head] = true;
                    queue.push_back(a.head);
                }
            }
        }
    }
    Ok(dist)
}

fn extract_cycle(h: &GenGraph, pred: &[Option<usize>], start: NodeId) -> InfeasibleCycle {
    pred_graph_cycle(h, pred, start)
        .filter(|c| c.offset > 0)
        .or_else(|| pred_graph_cycle_anywhere(h, pred))
        .unwrap_or_else(|| classic_bellman_ford_cycle(h))
}

/// Walks predecessor arcs from `start`, returning the first repeated loop.
fn pred_graph_cycle(h: &GenGraph, pred: &[Option<usize>], start: NodeId) -> Option<InfeasibleCycle> {
    let mut seen = vec![false; h.node_count()];
    let mut v = start;
    while !seen[v] {
        seen[v] = true;
        v = h.arcs()[pred[v]?].tail;
    }
    Some(collect_cycle(h, pred, v))
}

fn pred_graph_cycle_anywhere(h: &GenGraph, pred: &[Option<usize>]) -> Option<InfeasibleCycle> {
    (0..h.node_count()).find_map(|v| pred_graph_cycle(h, pred, v).filter(|c| c.offset > 0))
}

fn collect_cycle(h: &GenGraph, pred: &[Option<usize>], anchor: NodeId) -> InfeasibleCycle {
    let mut arcs = Vec::new();
    let mut v = anchor;
    loop {
        let i = pred[v].expect("node on a predecessor cycle");
        arcs.push(i);
        v = h.arcs()[i].tail;
        if v == anchor {
            break;
        }
    }
    arcs.reverse();
    let offset = arcs.iter().map(|&i| h.arcs()[i].offset).sum();
    InfeasibleCycle { arcs, offset }
}

/// Textbook n-pass Bellman-Ford; the node relaxed in the last pass leads
/// back into a negative cycle.
fn classic_bellman_ford_cycle(h: &GenGraph) -> InfeasibleCycle {
    let n = h.node_count();
    let mut dist = vec![0i64; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last = None;
    for _ in 0..n {
        last = None;
        for (i, a) in h.arcs().iter().enumerate() {
            if a.capacity.is_infinite() && dist[a.tail] - a.offset < dist[a.head] {
                dist[a.head] = dist[a.tail] - a.offset;
                pred[a.head] = Some(i);
                last = Some(a.head);
            }
        }
    }
    let mut v = last.expect("a negative cycle keeps relaxing");
    for _ in 0..n {
        v = h.arcs()[pred[v].expect("predecessor")].tail;
    }
    collect_cycle(h, &pred, v)
}

/// Checks that the hard constraints (infinite arcs) admit a ranking.
pub fn check_feasible(h: &GenGraph) -> std::result::Result<(), InfeasibleCycle> {
    hard_constraint_potentials(h).map(|_| ())
}

/// Objective of `ranks` on `h`.
pub fn evaluate(h: &GenGraph, ranks: &[i64]) -> Objective {
    let mut total: u64 = 0;
    for a in h.arcs() {
        let slack = ranks[a.tail] - ranks[a.head] + a.offset;
        if slack <= 0 {
            continue;
        }
        match a.capacity {
            Capacity::Infinite => return Objective::Infinite,
            Capacity::Finite(c) => total += c * slack as u64,
        }
    }
    Objective::Finite(total)
}

/// Solves the instance exactly. Ranks are the canonical shortest-path
/// potentials of the optimal residual network, shifted so that every weakly
/// connected component has minimum rank 0.
pub fn solve(h: &GenGraph) -> Result<GenSolution> {
    let potentials = hard_constraint_potentials(h).map_err(Error::Infeasible)?;
    let mut network = circulation::Circulation::new(h, potentials)?;
    network.run();
    let dual = network.dual_value();
    let mut ranks = network.canonical_ranks();
    normalize_components(h, &mut ranks);

    let objective = evaluate(h, &ranks)
        .finite()
        .expect("optimal potentials satisfy every hard constraint");
    debug_assert_eq!(objective as i64, dual, "strong duality");
    Ok(GenSolution {
        ranking: GenRanking::new(ranks),
        objective,
    })
}

fn normalize_components(h: &GenGraph, ranks: &mut [i64]) {
    let n = h.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in h.arcs() {
        let (ra, rb) = (find(&mut parent, a.tail), find(&mut parent, a.head));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut min_rank = vec![i64::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        min_rank[r] = min_rank[r].min(ranks[v]);
    }
    for v in 0..n {
        let r = find(&mut parent, v);
        ranks[v] -= min_rank[r];
    }
}
