//! Fully dynamic distances: two staged copies of the batch-deletion
//! structure, potentials for negative weights, Floyd-Warshall insertion
//! overlays and long-range completion.

mod engine;
mod johnson;
mod long_range;
mod overlay;

pub use engine::{
    deterministic_delta, deterministic_hop, unweighted_delta, unweighted_hop, unweighted_levels, weighted_delta,
    DynamicApsp, EngineConfig, ScheduleEvent, ScheduleKind, UpdateReport, Variant,
};
pub use johnson::johnson_potentials;
pub use long_range::long_range_complete;
pub use overlay::{fw_insert_overlay, InsertedNode};
