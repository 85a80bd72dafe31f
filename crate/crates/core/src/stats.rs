//! Exact operation counters.

use std::ops::AddAssign;

/// Work done by one operation. All fields are exact event counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Work {
    /// Kernel edge relaxations plus min-plus pair combines.
    pub relaxations: u64,
    /// Total edges over all sketch graphs built.
    pub sketch_edges: u64,
    /// Total affected nodes over all sketch graphs built.
    pub affected_nodes: u64,
}

impl AddAssign for Work {
    fn add_assign(&mut self, o: Work) {
        self.relaxations += o.relaxations;
        self.sketch_edges += o.sketch_edges;
        self.affected_nodes += o.affected_nodes;
    }
}
