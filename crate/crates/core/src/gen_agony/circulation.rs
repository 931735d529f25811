//! Exact min-cost circulation by the primal-dual method.
//!
//! Every arc `(u, v, c, b)` becomes a residual pair: forward with capacity `c`
//! and cost `-b`, backward with capacity 0 and cost `b`. Node potentials start
//! at the hard-constraint shortest distances, which make every infinite arc's
//! reduced cost non-negative. Finite arcs with negative reduced cost are then
//! saturated, and the resulting excesses are routed back in phases: a Dijkstra
//! pass lifts the potentials, then a Dinic max flow saturates the zero
//! reduced-cost subgraph. Reduced costs stay non-negative throughout, so the
//! final flow is optimal and the final potentials certify it.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{Capacity, GenGraph};
use crate::error::{Error, Result};

const UNREACHED: usize = usize::MAX;

pub(super) struct Circulation {
    node_count: usize,
    head: Vec<usize>,
    residual: Vec<i64>,
    cost: Vec<i64>,
    adj_start: Vec<usize>,
    adj: Vec<usize>,
    balance: Vec<i64>,
    potential: Vec<i64>,
}

impl Circulation {
    pub(super) fn new(h: &GenGraph, potential: Vec<i64>) -> Result<Self> {
        let n = h.node_count();
        let mut finite_total: i64 = 0;
        for a in h.arcs() {
            if let Capacity::Finite(c) = a.capacity {
                finite_total = i64::try_from(c)
                    .ok()
                    .and_then(|c| finite_total.checked_add(c))
                    .filter(|&t| t < i64::MAX / 4)
                    .ok_or_else(|| Error::InvalidArgument("total arc capacity overflows".into()))?;
            }
        }
        // No optimal circulation routes more than the total finite capacity
        // through an infinite arc, so this bound never binds.
        let infinite_cap = finite_total + 1;

        let mut head = Vec::with_capacity(2 * h.arcs().len());
        let mut residual = Vec::with_capacity(2 * h.arcs().len());
        let mut cost = Vec::with_capacity(2 * h.arcs().len());
        let mut finite = Vec::with_capacity(h.arcs().len());
        for a in h.arcs() {
            let cap = match a.capacity {
                Capacity::Finite(0) => continue,
                Capacity::Finite(c) => c as i64,
                Capacity::Infinite => infinite_cap,
            };
            head.push(a.head);
            residual.push(cap);
            cost.push(-a.offset);
            head.push(a.tail);
            residual.push(0);
            cost.push(a.offset);
            finite.push(!a.capacity.is_infinite());
        }

        let mut degree = vec![0usize; n + 1];
        for e in 0..head.len() {
            degree[head[e ^ 1]] += 1;
        }
        let mut adj_start = vec![0usize; n + 1];
        for v in 0..n {
            adj_start[v + 1] = adj_start[v] + degree[v];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![0usize; head.len()];
        for e in 0..head.len() {
            let tail = head[e ^ 1];
            adj[fill[tail]] = e;
            fill[tail] += 1;
        }

        let mut net = Circulation {
            node_count: n,
            head,
            residual,
            cost,
            adj_start,
            adj,
            balance: vec![0; n],
            potential,
        };
        for (j, &is_finite) in finite.iter().enumerate() {
            let e = 2 * j;
            if is_finite && net.reduced_cost(e) < 0 {
                let c = net.residual[e];
                net.push(e, c);
                net.balance[net.head[e]] += c;
                net.balance[net.head[e ^ 1]] -= c;
            }
        }
        Ok(net)
    }

    fn tail(&self, e: usize) -> usize {
        self.head[e ^ 1]
    }

    fn reduced_cost(&self, e: usize) -> i64 {
        self.cost[e] + self.potential[self.tail(e)] - self.potential[self.head[e]]
    }

    fn push(&mut self, e: usize, amount: i64) {
        self.residual[e] -= amount;
        self.residual[e ^ 1] += amount;
    }

    fn out_edges(&self, v: usize) -> std::ops::Range<usize> {
        self.adj_start[v]..self.adj_start[v + 1]
    }

    pub(super) fn run(&mut self) {
        while self.balance.iter().any(|&b| b > 0) {
            self.raise_potentials();
            self.route_admissible();
        }
    }

    /// Dijkstra from all excess nodes on reduced costs, stopped at the
    /// nearest deficit node; potentials grow by the capped distances.
    fn raise_potentials(&mut self) {
        let n = self.node_count;
        let mut dist = vec![i64::MAX; n];
        let mut heap = BinaryHeap::new();
        for v in 0..n {
            if self.balance[v] > 0 {
                dist[v] = 0;
                heap.push(Reverse((0i64, v)));
            }
        }
        let mut bound = None;
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if self.balance[u] < 0 {
                bound = Some(d);
                break;
            }
            for i in self.out_edges(u) {
                let e = self.adj[i];
                if self.residual[e] <= 0 {
                    continue;
                }
                let v = self.head[e];
                let nd = d + self.reduced_cost(e);
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        let bound = bound.expect("excess always has a residual path back to a deficit");
        for (p, d) in self.potential.iter_mut().zip(&dist) {
            *p += (*d).min(bound);
        }
    }

    fn admissible(&self, e: usize) -> bool {
        self.residual[e] > 0 && self.reduced_cost(e) == 0
    }

    /// Dinic max flow from excess to deficit nodes over zero reduced-cost arcs.
    fn route_admissible(&mut self) {
        let n = self.node_count;
        let mut level = vec![UNREACHED; n];
        let mut queue = VecDeque::new();
        loop {
            level.fill(UNREACHED);
            queue.clear();
            for v in 0..n {
                if self.balance[v] > 0 {
                    level[v] = 0;
                    queue.push_back(v);
                }
            }
            let mut sink_level = None;
            while let Some(u) = queue.pop_front() {
                if sink_level.is_some_and(|l| level[u] >= l) {
                    continue;
                }
                for i in self.out_edges(u) {
                    let e = self.adj[i];
                    let v = self.head[e];
                    if level[v] == UNREACHED && self.admissible(e) {
                        level[v] = level[u] + 1;
                        if self.balance[v] < 0 && sink_level.is_none() {
                            sink_level = Some(level[v]);
                        }
                        queue.push_back(v);
                    }
                }
            }
            if sink_level.is_none() {
                return;
            }

            let mut cursor: Vec<usize> = self.adj_start[..n].to_vec();
            let mut path = Vec::new();
            for s in 0..n {
                while self.balance[s] > 0 {
                    if self.augment_from(s, &mut level, &mut cursor, &mut path) == 0 {
                        break;
                    }
                }
            }
        }
    }

    fn augment_from(&mut self, source: usize, level: &mut [usize], cursor: &mut [usize], path: &mut Vec<usize>) -> i64 {
        path.clear();
        let mut u = source;
        loop {
            if self.balance[u] < 0 {
                let mut amount = self.balance[source].min(-self.balance[u]);
                for &e in path.iter() {
                    amount = amount.min(self.residual[e]);
                }
                for i in 0..path.len() {
                    self.push(path[i], amount);
                }
                self.balance[source] -= amount;
                self.balance[u] += amount;
                return amount;
            }
            let end = self.adj_start[u + 1];
            let mut next = None;
            while cursor[u] < end {
                let e = self.adj[cursor[u]];
                let v = self.head[e];
                if level[v] != UNREACHED && level[v] == level[u] + 1 && self.admissible(e) {
                    next = Some(e);
                    break;
                }
                cursor[u] += 1;
            }
            match next {
                Some(e) => {
                    path.push(e);
                    u = self.head[e];
                }
                None => {
                    level[u] = UNREACHED;
                    match path.pop() {
                        None => return 0,
                        Some(e) => {
                            u = self.tail(e);
                            cursor[u] += 1;
                        }
                    }
                }
            }
        }
    }

    /// `sum of b * flow` over all arcs; equals the optimal primal objective.
    pub(super) fn dual_value(&self) -> i64 {
        (0..self.head.len())
            .step_by(2)
            .map(|e| -self.cost[e] * self.residual[e + 1])
            .sum()
    }

    /// Negated shortest distances in the residual network from a virtual
    /// source joined to every node by a zero-cost arc.
    pub(super) fn canonical_ranks(&self) -> Vec<i64> {
        let n = self.node_count;
        // Dijkstra on reduced costs; key(v) = dist(v) - potential(v).
        let mut key: Vec<i64> = self.potential.iter().map(|p| -p).collect();
        let mut heap: BinaryHeap<Reverse<(i64, usize)>> = (0..n).map(|v| Reverse((key[v], v))).collect();
        let mut done = vec![false; n];
        while let Some(Reverse((k, u))) = heap.pop() {
            if done[u] || k > key[u] {
                continue;
            }
            done[u] = true;
            for i in self.out_edges(u) {
                let e = self.adj[i];
                if self.residual[e] <= 0 {
                    continue;
                }
                let v = self.head[e];
                let nk = k + self.reduced_cost(e);
                if nk < key[v] {
                    key[v] = nk;
                    heap.push(Reverse((nk, v)));
                }
            }
        }
        key.iter().zip(&self.potential).map(|(k, p)| -(k + p)).collect()
    }
}
