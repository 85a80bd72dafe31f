//! Batch-deletion structure: per-level visits of sampled centers with
//! hop-bounded trees, congestion-balanced visit order and sorted candidate
//! lists, answering "all distances after deleting `D`" from one build.
//!
//! All node ids inside a [`DecrementalStructure`] are local snapshot indices
//! `0..n`; [`DecrementalStructure::ids`] maps them back.

mod build;
mod delete;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

pub(crate) use build::ceil_log2;
pub use build::{preprocess, preprocess_det, BuildSpec, Kernel, Shape, StagedBuild};
pub use delete::{batch_delete, batch_delete_det, min_delta_query, DeletionMarks, SketchReport};

use crate::graph::{Graph, NodeId, Weight, INFINITY, NONE};
use crate::sssp::HopTree;
use crate::view::DistanceView;

/// Output of one visit: both trees in the graph without earlier-visited
/// nodes, plus dense per-node copies of what pair combines need.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VisitRecord {
    node: u32,
    to_tree: HopTree,
    from_tree: HopTree,
    to_dist: Vec<Weight>,
    to_hops: Vec<u32>,
    /// Successor of each node on its path to the visited node.
    to_next: Vec<u32>,
    from_dist: Vec<Weight>,
    from_hops: Vec<u32>,
    /// First hop out of the visited node toward each node.
    from_first: Vec<u32>,
}

impl VisitRecord {
    pub(crate) fn new(node: NodeId, to_tree: HopTree, from_tree: HopTree) -> Self {
        VisitRecord {
            node: node as u32,
            to_dist: to_tree.dist_vec(),
            to_hops: to_tree.hops_vec(),
            to_next: to_tree.link_vec(),
            from_dist: from_tree.dist_vec(),
            from_hops: from_tree.hops_vec(),
            from_first: from_tree.root_branches(),
            to_tree,
            from_tree,
        }
    }

    pub fn node(&self) -> NodeId {
        self.node as NodeId
    }

    /// Tree of paths into the visited node.
    pub fn to_tree(&self) -> &HopTree {
        &self.to_tree
    }

    /// Tree of paths out of the visited node.
    pub fn from_tree(&self) -> &HopTree {
        &self.from_tree
    }

    /// `(dist, hops, first hop)` of the stored `s -> t` walk through this
    /// node, `None` when either half is missing.
    #[inline]
    pub fn through(&self, s: NodeId, t: NodeId) -> Option<(Weight, u32, u32)> {
        let (a, b) = (self.to_dist[s], self.from_dist[t]);
        if a == INFINITY || b == INFINITY {
            return None;
        }
        let first = if s == self.node as NodeId {
            self.from_first[t]
        } else {
            self.to_next[s]
        };
        Some((a + b, self.to_hops[s] + self.from_hops[t], first))
    }
}

/// Candidate lists in compressed rows: for each ordered pair, the visit
/// ranks with a finite through-value, ascending by (dist, hops, rank).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub(crate) struct CandidateLists {
    offsets: Vec<u32>,
    ranks: Vec<u16>,
}

impl CandidateLists {
    fn get(&self, n: usize, s: NodeId, t: NodeId) -> &[u16] {
        let k = s * n + t;
        &self.ranks[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layer {
    level: u32,
    hop: usize,
    centers: Vec<u32>,
    is_center: Vec<bool>,
    visits: Vec<VisitRecord>,
    /// Visit rank per node, `NONE` if unvisited.
    rank: Vec<u32>,
    visited: Vec<bool>,
    congestion: Vec<u64>,
    lists: Option<CandidateLists>,
}

impl Layer {
    /// Empty layer over `n` nodes with the given centers.
    pub fn new(level: u32, hop: usize, centers: Vec<u32>, n: usize) -> Self {
        let mut is_center = vec![false; n];
        for &c in &centers {
            is_center[c as usize] = true;
        }
        Layer {
            level,
            hop,
            centers,
            is_center,
            visits: Vec::new(),
            rank: vec![NONE; n],
            visited: vec![false; n],
            congestion: vec![0; n],
            lists: None,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn hop_bound(&self) -> usize {
        self.hop
    }

    pub fn centers(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.centers.iter().map(|&c| c as NodeId)
    }

    pub fn center_count(&self) -> usize {
        self.centers.len()
    }

    pub fn is_center(&self, v: NodeId) -> bool {
        self.is_center[v]
    }

    pub fn visits(&self) -> &[VisitRecord] {
        &self.visits
    }

    pub fn visit_order(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.visits.iter().map(VisitRecord::node)
    }

    pub fn rank_of(&self, v: NodeId) -> Option<usize> {
        let r = self.rank[v];
        (r != NONE).then_some(r as usize)
    }

    pub fn congestion(&self, v: NodeId) -> u64 {
        self.congestion[v]
    }

    pub fn max_congestion(&self) -> u64 {
        self.congestion.iter().copied().max().unwrap_or(0)
    }

    pub fn has_lists(&self) -> bool {
        self.lists.is_some()
    }

    /// Visit ranks of the `s -> t` candidate list, empty without lists.
    pub fn candidates(&self, s: NodeId, t: NodeId) -> &[u16] {
        match &self.lists {
            Some(l) => l.get(self.rank.len(), s, t),
            None => &[],
        }
    }

    /// Nodes visited strictly before rank `r`.
    pub fn visited_before(&self, r: usize) -> Vec<bool> {
        let mut m = vec![false; self.rank.len()];
        for rec in &self.visits[..r] {
            m[rec.node()] = true;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecrementalStructure {
    spec: BuildSpec,
    ids: Vec<NodeId>,
    local: Vec<u32>,
    /// Compact snapshot with reweighted, non-negative weights.
    snapshot: Graph,
    potentials: Vec<Weight>,
    layers: Vec<Layer>,
    /// Per-pair minimum over every layer, served when nothing is deleted.
    base: DistanceView,
}

impl DecrementalStructure {
    pub fn spec(&self) -> &BuildSpec {
        &self.spec
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Local index to original node id.
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn local_of(&self, v: NodeId) -> Option<usize> {
        match self.local.get(v) {
            Some(&i) if i != NONE => Some(i as usize),
            _ => None,
        }
    }

    /// Reweighted snapshot over local indices.
    pub fn snapshot(&self) -> &Graph {
        &self.snapshot
    }

    /// Potentials over local indices; zero when the input was non-negative.
    pub fn potentials(&self) -> &[Weight] {
        &self.potentials
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn max_congestion(&self) -> u64 {
        self.layers.iter().map(Layer::max_congestion).max().unwrap_or(0)
    }

    pub fn centers_total(&self) -> usize {
        self.layers.iter().map(Layer::center_count).sum()
    }

    /// Converts a view in reweighted space back to original weights.
    pub fn unreweight(&self, view: &mut DistanceView) {
        let p: Vec<Weight> = view
            .nodes()
            .iter()
            .map(|&v| self.local_of(v).map_or(0, |i| self.potentials[i]))
            .collect();
        view.shift_finite(|i, j| p[j] - p[i]);
    }

    /// Stable hash of the full structure.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}
