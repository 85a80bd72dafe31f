//! Fully dynamic all-pairs shortest paths on weighted directed graphs with
//! worst-case update bounds.
//!
//! The engine keeps a batch-deletion structure built from hop-bounded
//! shortest path trees around sampled centers, rebuilt in the background in
//! slices, and patches node insertions in with Floyd-Warshall iterations.

pub mod decremental;
pub mod dynamic;
pub mod error;
pub mod format;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod sampling;
pub mod sssp;
pub mod stats;
pub mod view;

pub use dynamic::{DynamicApsp, EngineConfig, Variant};
pub use error::{Error, Result};
pub use graph::{Graph, NodeId, UpdateEvent, Weight, INFINITY};
pub use view::DistanceView;
