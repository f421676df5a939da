//! Exact small cuts in a simulated CONGEST network.
//!
//! The crate bundles a round-accurate synchronous message-passing simulator,
//! the distributed primitives built on it (truncated BFS, path pipelining,
//! renaming, broadcast), and the algorithms that compose them: randomized and
//! deterministic exact min-cut, vertex cuts, all-edge connectivities, and sparse
//! connectivity certificates. Every algorithm can be checked against the
//! centralized oracles in [`graph::oracle`].

pub mod bounds;
pub mod certificates;
pub mod derand;
pub mod edgeconn;
pub mod error;
pub mod flow;
pub mod graph;
pub mod mincut;
pub mod primitives;
pub mod sim;
pub mod util;

pub use error::{Error, Result};
pub use graph::{EdgeId, FaultKind, FaultSet, Multigraph, NodeId};
