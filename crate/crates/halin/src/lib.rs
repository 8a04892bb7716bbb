//! Recognition of Halin graphs and D3-reducible graphs by local reduction
//! rules, with certificate reconstruction.
//!
//! A graph is *D3-reducible* when repeatedly contracting triangles of
//! degree-3 vertices (rule D3a) and shortcutting degree-3 paths under a
//! common apex (rule D3b) collapses it to `K4`. The [`engine`] module runs
//! that process in linear time and records a replayable trace; [`recognize`]
//! layers vetoing hooks on top of it to decide membership in the Halin,
//! wheel, and dual-of-planar-3-tree subclasses; [`reconstruct`] replays
//! traces backwards to build Hamiltonian cycles, Halin tree/cycle
//! decompositions, and planar rotation systems. [`generate`] produces test
//! corpora (including glued-wheel primal/dual pairs) and [`oracle`] holds
//! independent brute-force checkers used to validate everything else.

pub mod engine;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod recognize;
pub mod reconstruct;

pub use graph::{Edge, Graph, GraphError, VertexId};
