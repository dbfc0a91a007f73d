//! Generation of uniform random simple connected graphs with a prescribed
//! degree sequence.
//!
//! The pipeline has three stages:
//!
//! 1. [`realization::havel_hakimi`] builds a deterministic simple graph
//!    matching the degree sequence (feasibility via
//!    [`realization::erdos_gallai`]),
//! 2. [`realization::connect`] merges its connected components by
//!    degree-preserving edge swaps,
//! 3. [`shuffle::run_shuffle`] randomizes the edges with an edge-swap Markov
//!    chain while keeping the graph simple and connected.
//!
//! Four shuffle strategies are provided, from a naive per-swap connectivity
//! check up to a windowed chain with bounded isolation tests that runs in
//! near-linear time on heavy-tailed graphs. [`degree_model`] samples
//! power-law degree sequences, [`bias`] quantifies the bias of the
//! stub-matching shortcut, and [`bench`] hosts the measurement harness used
//! by the CLI.

pub mod bench;
pub mod bias;
pub mod degree_model;
pub mod graph;
pub mod io;
pub mod realization;
pub mod shuffle;

pub use graph::{Graph, GraphError};
pub use realization::DegreeSequence;
pub use shuffle::{HeuristicKind, ShuffleConfig, ShuffleStats};
