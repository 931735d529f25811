//! Dynamic hierarchies in temporal directed graphs.
//!
//! Ranks vertices of a timestamped, weighted digraph so that edges point from
//! lower to higher ranks as much as possible, measuring violations by agony.
//! Three variants are provided:
//!
//! * static agony, one rank per vertex ([`reductions::static_to_gen`]);
//! * fluctuation-penalized agony, where ranks may vary over time at a cost of
//!   `lambda` per unit of change ([`reductions::fluc_to_gen`]);
//! * segmented agony, where each vertex changes rank at most once, solved by
//!   the alternating heuristic in [`seg_solver`].
//!
//! All exact subproblems are reduced to [`gen_agony`], a generalized agony
//! problem solved through min-cost circulation duality.

pub mod cli;
pub mod error;
pub mod gen_agony;
pub mod metrics;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod reductions;
pub mod seg_solver;
pub mod temporal_graph;

pub use error::{Error, Result};
pub use gen_agony::{Capacity, GenGraph, GenRanking, GenSolution, Objective};
pub use reductions::{RankAssignment, RankLookup, RankSegmentation, Segment};
pub use temporal_graph::{ColumnMode, TemporalEdge, TemporalGraph, Timestamp, VertexId};
