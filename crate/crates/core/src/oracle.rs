//! Exhaustive reference solvers, seeded instance generators, and the 3SAT
//! gadget used to exercise the segmentation solver.
//!
//! Everything here is exponential and only meant for tiny instances; every
//! brute-force routine refuses search spaces above [`SEARCH_LIMIT`].

use std::collections::BTreeMap;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gen_agony::{evaluate, Capacity, GenGraph, Objective};
use crate::metrics::score;
use crate::reductions::RankLookup;
use crate::temporal_graph::{GraphBuilder, TemporalGraph, Timestamp, VertexId};

pub const SEARCH_LIMIT: u128 = 10_000_000;

fn check_space(size: u128) -> Result<()> {
    if size > SEARCH_LIMIT {
        Err(Error::SearchTooLarge(size))
    } else {
        Ok(())
    }
}

/// Calls `visit` with every vector of option indices, i.e. every element of
/// the product `0..sizes[0] x 0..sizes[1] x ...`.
fn for_each_index_vector(sizes: &[usize], mut visit: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        visit(&idx);
        let mut pos = 0;
        loop {
            if pos == sizes.len() {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn product(sizes: &[usize]) -> u128 {
    sizes.iter().map(|&s| s as u128).product()
}

/// Largest rank spread an optimal ranking ever needs: some optimum has no gap
/// between consecutive used rank values larger than the largest `|offset|`.
pub fn sufficient_rank_bound(h: &GenGraph) -> i64 {
    let max_offset = h.arcs().iter().map(|a| a.offset.abs()).max().unwrap_or(0).max(1);
    (h.node_count().saturating_sub(1) as i64) * max_offset
}

/// Minimum of [`evaluate`] over all rank vectors in `[0, rank_bound]^|W|`.
pub fn brute_gen(h: &GenGraph, rank_bound: i64) -> Result<Objective> {
    let n = h.node_count();
    let width = (rank_bound.max(0) + 1) as usize;
    let sizes = vec![width; n];
    check_space(product(&sizes))?;
    let mut best = Objective::Infinite;
    let mut ranks = vec![0i64; n];
    for_each_index_vector(&sizes, |idx| {
        for (r, &i) in ranks.iter_mut().zip(idx) {
            *r = i as i64;
        }
        let value = evaluate(h, &ranks);
        if value < best {
            best = value;
        }
    });
    if n == 0 {
        best = evaluate(h, &[]);
    }
    Ok(best)
}

struct Lookup<F: Fn(VertexId, Timestamp) -> i64>(F);

impl<F: Fn(VertexId, Timestamp) -> i64> RankLookup for Lookup<F> {
    fn rank(&self, v: VertexId, t: Timestamp) -> i64 {
        (self.0)(v, t)
    }
}

/// Best constant ranking with ranks in `[0, k - 1]`.
pub fn brute_static(g: &TemporalGraph, k: u32) -> Result<u64> {
    let sizes = vec![k as usize; g.vertex_count()];
    check_space(product(&sizes))?;
    let mut best = u64::MAX;
    for_each_index_vector(&sizes, |idx| {
        let ranks: Vec<i64> = idx.iter().map(|&i| i as i64).collect();
        best = best.min(score(g, &ranks));
    });
    Ok(best)
}

/// Best `score + lambda * flux` over all rankings of the active pairs with
/// ranks in `[0, k - 1]`.
pub fn brute_fluc(g: &TemporalGraph, lambda: u64, k: u32) -> Result<u64> {
    let pairs = g.active_pair_count();
    let sizes = vec![k as usize; pairs];
    check_space(product(&sizes))?;
    let mut best = u64::MAX;
    for_each_index_vector(&sizes, |idx| {
        let lookup = Lookup(|v: VertexId, t: Timestamp| idx[g.pair_index(v, t).expect("active pair")] as i64);
        let agony = score(g, &lookup);
        let flux: u64 = (0..g.vertex_count())
            .map(|v| {
                let first = g.pair_offset(v);
                (first + 1..first + g.active_timestamps(v).len())
                    .map(|i| idx[i].abs_diff(idx[i - 1]) as u64)
                    .sum::<u64>()
            })
            .sum();
        best = best.min(agony + lambda * flux);
    });
    Ok(best)
}

/// Best segmentation with ranks in `[0, k - 1]`: every vertex picks
/// `(before, after, change point)` with the change point in `T`, or no change.
pub fn brute_seg(g: &TemporalGraph, k: u32) -> Result<u64> {
    let k = k as i64;
    let options: Vec<Vec<(i64, i64, Timestamp)>> = (0..g.vertex_count())
        .map(|v| {
            if g.active_timestamps(v).is_empty() {
                return vec![(0, 0, Timestamp::MAX)];
            }
            let mut opts: Vec<_> = (0..k).map(|r| (r, r, Timestamp::MAX)).collect();
            for r1 in 0..k {
                for r2 in 0..k {
                    if r1 != r2 {
                        opts.extend(g.timestamps().iter().map(|&t| (r1, r2, t)));
                    }
                }
            }
            opts
        })
        .collect();
    min_over_segment_options(g, &options)
}

/// Best `(before, after)` ranks in `[0, k - 1]` for fixed change points.
pub fn brute_change2ranks(g: &TemporalGraph, tau: &[Timestamp], k: u32) -> Result<u64> {
    let k = k as i64;
    let options: Vec<Vec<(i64, i64, Timestamp)>> = (0..g.vertex_count())
        .map(|v| {
            let mut opts = Vec::new();
            for r1 in 0..k {
                for r2 in 0..k {
                    opts.push((r1, r2, tau[v]));
                }
            }
            opts
        })
        .collect();
    min_over_segment_options(g, &options)
}

/// Best change points for fixed `(before, after)` ranks; a change point past
/// the last timestamp keeps `before` throughout.
pub fn brute_ranks2change(g: &TemporalGraph, before: &[i64], after: &[i64]) -> Result<u64> {
    let options: Vec<Vec<(i64, i64, Timestamp)>> = (0..g.vertex_count())
        .map(|v| {
            let mut opts: Vec<_> = g.timestamps().iter().map(|&t| (before[v], after[v], t)).collect();
            opts.push((before[v], after[v], Timestamp::MAX));
            opts
        })
        .collect();
    min_over_segment_options(g, &options)
}

fn min_over_segment_options(g: &TemporalGraph, options: &[Vec<(i64, i64, Timestamp)>]) -> Result<u64> {
    let sizes: Vec<usize> = options.iter().map(Vec::len).collect();
    check_space(product(&sizes))?;
    let mut best = u64::MAX;
    for_each_index_vector(&sizes, |idx| {
        let lookup = Lookup(|v: VertexId, t: Timestamp| {
            let (r1, r2, tau) = options[v][idx[v]];
            if t < tau {
                r1
            } else {
                r2
            }
        });
        best = best.min(score(g, &lookup));
    });
    if g.vertex_count() == 0 {
        best = 0;
    }
    Ok(best)
}

/// A 3-CNF formula; literal `+i` is variable `i`, `-i` its negation
/// (variables are numbered from 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub variables: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(variables: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for (j, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > variables {
                    return Err(Error::InvalidArgument(format!(
                        "clause {} has literal {lit} outside 1..={variables}",
                        j + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { variables, clauses })
    }

    /// Reads DIMACS CNF (`p cnf <vars> <clauses>` header, `c` comments,
    /// clauses terminated by `0`). Every clause must have exactly 3 literals.
    pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Self> {
        let mut variables = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 3 || fields[0] != "cnf" {
                    return Err(Error::parse(line_no, "malformed problem line"));
                }
                variables = Some(
                    fields[1]
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, "bad variable count"))?,
                );
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    let clause: [i32; 3] = current
                        .as_slice()
                        .try_into()
                        .map_err(|_| Error::parse(line_no, format!("clause has {} literals, expected 3", current.len())))?;
                    clauses.push(clause);
                    current.clear();
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            return Err(Error::parse(0, "unterminated final clause"));
        }
        let variables = variables.ok_or_else(|| Error::parse(0, "missing problem line"))?;
        CnfFormula::new(variables, clauses)
    }

    pub fn literal_value(lit: i32, assignment: &[bool]) -> bool {
        let value = assignment[lit.unsigned_abs() as usize - 1];
        if lit > 0 {
            value
        } else {
            !value
        }
    }

    /// Index of the first clause the assignment falsifies.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|&lit| Self::literal_value(lit, assignment)))
    }
}

fn var_labels(i: usize) -> (String, String) {
    (format!("p{i}"), format!("n{i}"))
}

fn clause_label(prefix: char, j: usize, l: usize) -> String {
    format!("{prefix}{j}_{l}")
}

/// The reduction graph from 3SAT: vertices `p_i`, `n_i` per variable,
/// `c_jl` per literal occurrence, and `x_jl`, `y_jl`, `z_jl` per occurrence,
/// over timestamps 0, 1, 2, all edges of weight 1. The formula is satisfiable
/// iff the graph has a zero-score segmentation.
pub fn gadget_from_3sat(formula: &CnfFormula) -> TemporalGraph {
    let mut b = GraphBuilder::new();
    for i in 1..=formula.variables {
        let (p, n) = var_labels(i);
        b.add_vertex(&p);
        b.add_vertex(&n);
    }
    let m = formula.clauses.len();
    for prefix in ['c', 'x', 'y', 'z'] {
        for j in 1..=m {
            for l in 1..=3 {
                b.add_vertex(&clause_label(prefix, j, l));
            }
        }
    }

    for i in 1..=formula.variables {
        let (p, n) = var_labels(i);
        b.add_edge(&p, &n, 1, 0);
        b.add_edge(&n, &p, 1, 1);
        b.add_edge(&p, &n, 1, 2);
    }
    for (j0, clause) in formula.clauses.iter().enumerate() {
        let j = j0 + 1;
        for (l0, &lit) in clause.iter().enumerate() {
            let c = clause_label('c', j, l0 + 1);
            let (p, n) = var_labels(lit.unsigned_abs() as usize);
            if lit > 0 {
                b.add_edge(&p, &c, 1, 0);
                b.add_edge(&c, &p, 1, 1);
            } else {
                b.add_edge(&c, &n, 1, 0);
                b.add_edge(&n, &c, 1, 1);
            }
        }
        for l in 1..=3 {
            let next = l % 3 + 1;
            b.add_edge(&clause_label('x', j, l), &clause_label('c', j, next), 1, 1);
        }
        for l in 1..=3 {
            b.add_edge(&clause_label('c', j, l), &clause_label('x', j, l), 1, 2);
        }
        for l in 1..=3 {
            let (x, y, z) = (
                clause_label('x', j, l),
                clause_label('y', j, l),
                clause_label('z', j, l),
            );
            b.add_edge(&y, &x, 1, 0);
            b.add_edge(&z, &x, 1, 0);
            b.add_edge(&z, &y, 1, 1);
            b.add_edge(&x, &z, 1, 1);
            b.add_edge(&y, &x, 1, 2);
            b.add_edge(&x, &z, 1, 2);
        }
    }
    b.build()
}

/// Change points, keyed by gadget vertex label, under which the gadget's
/// change-point instance is acyclic whenever `assignment` satisfies the
/// formula.
pub fn tau_from_assignment(formula: &CnfFormula, assignment: &[bool]) -> Result<BTreeMap<String, Timestamp>> {
    if assignment.len() != formula.variables {
        return Err(Error::InvalidArgument(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            formula.variables
        )));
    }
    if let Some(j) = formula.first_unsatisfied(assignment) {
        return Err(Error::Unsatisfied(j + 1));
    }
    let mut tau = BTreeMap::new();
    for (i0, &value) in assignment.iter().enumerate() {
        let (p, n) = var_labels(i0 + 1);
        let (tp, tn) = if value { (1, 2) } else { (2, 1) };
        tau.insert(p, tp);
        tau.insert(n, tn);
    }
    for (j0, clause) in formula.clauses.iter().enumerate() {
        for (l0, &lit) in clause.iter().enumerate() {
            let (j, l) = (j0 + 1, l0 + 1);
            let tc = if CnfFormula::literal_value(lit, assignment) { 2 } else { 1 };
            tau.insert(clause_label('c', j, l), tc);
            tau.insert(clause_label('x', j, l), 1);
            tau.insert(clause_label('y', j, l), 2);
            tau.insert(clause_label('z', j, l), 2);
        }
    }
    Ok(tau)
}

/// Orders a label-keyed change-point map by the vertex ids of `g`.
pub fn tau_vector(g: &TemporalGraph, tau: &BTreeMap<String, Timestamp>) -> Result<Vec<Timestamp>> {
    g.labels()
        .iter()
        .map(|l| tau.get(l).copied().ok_or_else(|| Error::UnknownVertex(l.clone())))
        .collect()
}

/// Seeded generator of small random instances.
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        InstanceGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Up to `max_nodes` nodes (at least 1), up to `max_arcs` arcs, offsets in
    /// `[-max_offset, max_offset]`, capacities from `{1, 2, 3, inf}`.
    pub fn gen_graph(&mut self, max_nodes: usize, max_arcs: usize, max_offset: i64) -> GenGraph {
        let n = self.rng.gen_range(1..=max_nodes);
        let m = self.rng.gen_range(0..=max_arcs);
        let mut h = GenGraph::new(n);
        for _ in 0..m {
            let tail = self.rng.gen_range(0..n);
            let head = self.rng.gen_range(0..n);
            let capacity = match self.rng.gen_range(0..4) {
                0 => Capacity::Infinite,
                c => Capacity::Finite(c),
            };
            let offset = self.rng.gen_range(-max_offset..=max_offset);
            h.add_arc(tail, head, capacity, offset);
        }
        h
    }

    /// Up to `max_vertices` vertices (at least 1), 1 to `max_edges` edges with
    /// weights in `1..=max_weight` and timestamps in `0..max_timestamps`.
    pub fn temporal_graph(
        &mut self,
        max_vertices: usize,
        max_timestamps: i64,
        max_edges: usize,
        max_weight: u64,
    ) -> TemporalGraph {
        let n = self.rng.gen_range(1..=max_vertices);
        let m = self.rng.gen_range(1..=max_edges);
        let edges: Vec<_> = (0..m)
            .map(|_| {
                (
                    self.rng.gen_range(0..n),
                    self.rng.gen_range(0..n),
                    self.rng.gen_range(1..=max_weight),
                    self.rng.gen_range(0..max_timestamps),
                )
            })
            .collect();
        TemporalGraph::from_indexed_edges(n, &edges)
    }

    /// A random formula together with a truth assignment satisfying it.
    pub fn satisfiable_3sat(&mut self, variables: usize, max_clauses: usize) -> (CnfFormula, Vec<bool>) {
        let assignment: Vec<bool> = (0..variables).map(|_| self.rng.gen()).collect();
        let m = self.rng.gen_range(1..=max_clauses);
        let mut clauses = Vec::with_capacity(m);
        while clauses.len() < m {
            let mut clause = [0i32; 3];
            for lit in &mut clause {
                let var = self.rng.gen_range(1..=variables) as i32;
                *lit = if self.rng.gen() { var } else { -var };
            }
            if clause.iter().any(|&lit| CnfFormula::literal_value(lit, &assignment)) {
                clauses.push(clause);
            }
        }
        clauses.shuffle(&mut self.rng);
        (
            CnfFormula::new(variables, clauses).expect("literals in range"),
            assignment,
        )
    }
}
