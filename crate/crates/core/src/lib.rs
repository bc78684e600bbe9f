//! Seed-set selection for the deterministic tipping (linear threshold) model.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: dense directed graphs, edge-list ingestion, generators, node removal.
//! * [`tipping`]: thresholds, one-step activation, the activation fixpoint and traces.
//! * [`decomp`]: the shell-style decomposition heuristic that returns a covering seed set.
//! * [`exact`]: exhaustive minimum seed search, the time-indexed 0/1 program and LP export.
//! * [`baselines`]: centrality measures, greedy centrality seeding and the
//!   degree-based upper bound on the minimum seed size.
//! * [`structure`]: clustering coefficient, modularity, Louvain and a planar least-squares fit.
//! * [`harness`]: experiment drivers and report emission used by the CLI.

pub mod baselines;
pub mod decomp;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod structure;
pub mod tipping;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, GraphBuilder, NodeId};
pub use tipping::{ActivationTrace, SeedSet, ThresholdAssignment, ThresholdSpec};
