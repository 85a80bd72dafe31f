//! Weighted directed graph with stable node identifiers and the node-level
//! update events the engine consumes.

use crate::error::{Error, Result};

/// Node identifier. Identifiers are never reused within one graph lifetime:
/// deleted nodes become tombstones.
pub type NodeId = usize;

/// Edge weight and distance type. [`INFINITY`] means "no path".
pub type Weight = i64;

pub const INFINITY: Weight = Weight::MAX;

/// `n * max|w| * HEADROOM` must fit in a [`Weight`].
pub const HEADROOM: i64 = 16;

/// Sentinel for "no node" in compact `u32` tables.
pub(crate) const NONE: u32 = u32::MAX;

/// Adds two weights, keeping [`INFINITY`] absorbing.
#[inline]
pub fn sat_add(a: Weight, b: Weight) -> Weight {
    if a == INFINITY || b == INFINITY {
        INFINITY
    } else {
        a + b
    }
}

pub(crate) fn check_headroom(nodes: usize, max_abs: i64) -> Result<()> {
    let fits = (nodes.max(1) as i64)
        .checked_mul(max_abs)
        .and_then(|x| x.checked_mul(HEADROOM))
        .is_some();
    if fits {
        Ok(())
    } else {
        Err(Error::OverflowRisk { nodes, max_abs })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UpdateEvent {
    InsertNode {
        node: NodeId,
        /// `(u, w)` pairs for edges `u -> node`.
        in_edges: Vec<(NodeId, Weight)>,
        /// `(v, w)` pairs for edges `node -> v`.
        out_edges: Vec<(NodeId, Weight)>,
    },
    DeleteNode {
        node: NodeId,
    },
}

impl UpdateEvent {
    pub fn node(&self) -> NodeId {
        match self {
            UpdateEvent::InsertNode { node, .. } | UpdateEvent::DeleteNode { node } => *node,
        }
    }

    pub fn is_insert(&self) -> bool {
        matches!(self, UpdateEvent::InsertNode { .. })
    }
}

/// Immutable-by-convention weighted digraph. Adjacency lists are kept sorted
/// by neighbour id and mirror each other (`u -> v` appears in `u`'s out-list
/// and `v`'s in-list with the same weight). Dead nodes have no edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    out: Vec<Vec<(NodeId, Weight)>>,
    inc: Vec<Vec<(NodeId, Weight)>>,
    alive: Vec<bool>,
    used: Vec<bool>,
    alive_count: usize,
}

impl Graph {
    /// Graph with nodes `0..n`, all alive, no edges.
    pub fn new(n: usize) -> Self {
        Graph {
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            alive: vec![true; n],
            used: vec![true; n],
            alive_count: n,
        }
    }

    /// Builds a graph from an edge list. Parallel edges collapse to their
    /// minimum weight; self-loops are dropped unless negative, which is an error.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, Weight)]) -> Result<Self> {
        let mut g = Graph::new(n);
        let mut max_abs = 0i64;
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::DanglingEndpoint {
                    line: 0,
                    node: u.max(v) as u64,
                });
            }
            max_abs = max_abs.max(w.checked_abs().unwrap_or(i64::MAX));
            if u == v {
                if w < 0 {
                    return Err(Error::NegativeCycle);
                }
                continue;
            }
            g.out[u].push((v, w));
        }
        check_headroom(n, max_abs)?;
        for u in 0..n {
            let list = &mut g.out[u];
            list.sort_unstable();
            list.dedup_by_key(|e| e.0);
            for &(v, w) in list.iter() {
                g.inc[v].push((u, w));
            }
        }
        // in-lists are filled in ascending source order, hence already sorted
        Ok(g)
    }

    /// Size of the identifier space (alive and dead ids).
    pub fn capacity(&self) -> usize {
        self.alive.len()
    }

    /// Number of alive nodes.
    pub fn node_count(&self) -> usize {
        self.alive_count
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    /// Whether the id has ever been occupied by a node.
    pub fn is_used(&self, v: NodeId) -> bool {
        self.used.get(v).copied().unwrap_or(false)
    }

    pub fn alive_mask(&self) -> &[bool] {
        &self.alive
    }

    pub fn alive_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.alive.iter().enumerate().filter_map(|(v, &a)| a.then_some(v))
    }

    pub fn out_edges(&self, u: NodeId) -> &[(NodeId, Weight)] {
        &self.out[u]
    }

    pub fn in_edges(&self, v: NodeId) -> &[(NodeId, Weight)] {
        &self.inc[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.out[v].len() + self.inc[v].len()
    }

    pub fn edge_weight(&self, u: NodeId, v: NodeId) -> Option<Weight> {
        let list = self.out.get(u)?;
        list.binary_search_by_key(&v, |e| e.0).ok().map(|i| list[i].1)
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Weight)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&(v, w)| (u, v, w)))
    }

    pub fn max_abs_weight(&self) -> i64 {
        self.edges()
            .map(|(_, _, w)| w.checked_abs().unwrap_or(i64::MAX))
            .max()
            .unwrap_or(0)
    }

    pub fn has_negative_edge(&self) -> bool {
        self.edges().any(|(_, _, w)| w < 0)
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edges().all(|(_, _, w)| w == 1)
    }

    /// Checks an event against the current graph without applying it.
    pub fn validate_event(&self, e: &UpdateEvent) -> Result<()> {
        match e {
            UpdateEvent::DeleteNode { node } => {
                if !self.is_alive(*node) {
                    return Err(Error::DeleteMissing(*node));
                }
            }
            UpdateEvent::InsertNode {
                node,
                in_edges,
                out_edges,
            } => {
                if self.is_used(*node) {
                    return Err(Error::InsertDuplicate(*node));
                }
                let mut max_abs = self.max_abs_weight();
                for &(u, w) in in_edges.iter().chain(out_edges) {
                    if !self.is_alive(u) {
                        return Err(Error::EdgeToDeadNode(u));
                    }
                    max_abs = max_abs.max(w.checked_abs().unwrap_or(i64::MAX));
                }
                check_headroom(self.node_count() + 1, max_abs)?;
            }
        }
        Ok(())
    }

    /// Returns a new graph with the event applied.
    pub fn apply_event(&self, e: &UpdateEvent) -> Result<Graph> {
        let mut g = self.clone();
        g.apply_in_place(e)?;
        Ok(g)
    }

    pub fn apply_in_place(&mut self, e: &UpdateEvent) -> Result<()> {
        self.validate_event(e)?;
        match e {
            UpdateEvent::DeleteNode { node } => self.remove_node(*node),
            UpdateEvent::InsertNode {
                node,
                in_edges,
                out_edges,
            } => self.add_node(*node, in_edges, out_edges),
        }
        Ok(())
    }

    fn remove_node(&mut self, x: NodeId) {
        for (y, _) in std::mem::take(&mut self.out[x]) {
            let list = &mut self.inc[y];
            if let Ok(i) = list.binary_search_by_key(&x, |e| e.0) {
                list.remove(i);
            }
        }
        for (z, _) in std::mem::take(&mut self.inc[x]) {
            let list = &mut self.out[z];
            if let Ok(i) = list.binary_search_by_key(&x, |e| e.0) {
                list.remove(i);
            }
        }
        self.alive[x] = false;
        self.alive_count -= 1;
    }

    fn add_node(&mut self, x: NodeId, in_edges: &[(NodeId, Weight)], out_edges: &[(NodeId, Weight)]) {
        if x >= self.capacity() {
            self.out.resize_with(x + 1, Vec::new);
            self.inc.resize_with(x + 1, Vec::new);
            self.alive.resize(x + 1, false);
            self.used.resize(x + 1, false);
        }
        self.alive[x] = true;
        self.used[x] = true;
        self.alive_count += 1;
        for &(v, w) in out_edges {
            upsert_min(&mut self.out[x], v, w);
            upsert_min(&mut self.inc[v], x, w);
        }
        for &(u, w) in in_edges {
            upsert_min(&mut self.inc[x], u, w);
            upsert_min(&mut self.out[u], x, w);
        }
    }

    /// Copy of the graph with the given nodes tombstoned.
    pub fn without(&self, nodes: impl IntoIterator<Item = NodeId>) -> Graph {
        let mut g = self.clone();
        for v in nodes {
            if g.is_alive(v) {
                g.remove_node(v);
            }
        }
        g
    }

    /// Relabels alive nodes to `0..node_count()` in ascending id order.
    /// Returns the compact graph and the compact-to-original id map.
    pub fn compact(&self) -> (Graph, Vec<NodeId>) {
        let ids: Vec<NodeId> = self.alive_nodes().collect();
        let mut local = vec![NONE; self.capacity()];
        for (i, &v) in ids.iter().enumerate() {
            local[v] = i as u32;
        }
        let n = ids.len();
        let mut g = Graph::new(n);
        for (i, &v) in ids.iter().enumerate() {
            g.out[i] = self.out[v].iter().map(|&(y, w)| (local[y] as NodeId, w)).collect();
            g.inc[i] = self.inc[v].iter().map(|&(y, w)| (local[y] as NodeId, w)).collect();
        }
        (g, ids)
    }

    /// Same topology with weights rewritten by `f(u, v, w)`.
    pub fn map_weights(&self, f: impl Fn(NodeId, NodeId, Weight) -> Weight) -> Graph {
        let mut g = self.clone();
        for u in 0..g.capacity() {
            for e in g.out[u].iter_mut() {
                e.1 = f(u, e.0, e.1);
            }
            for e in g.inc[u].iter_mut() {
                e.1 = f(e.0, u, e.1);
            }
        }
        g
    }

    /// Full recount of the adjacency mirror invariant.
    pub fn is_consistent(&self) -> bool {
        let n = self.capacity();
        if self.out.len() != n || self.inc.len() != n || self.used.len() != n {
            return false;
        }
        if self.alive.iter().filter(|&&a| a).count() != self.alive_count {
            return false;
        }
        for u in 0..n {
            let sorted = |l: &[(NodeId, Weight)]| l.windows(2).all(|p| p[0].0 < p[1].0);
            if !sorted(&self.out[u]) || !sorted(&self.inc[u]) {
                return false;
            }
            if !self.alive[u] && (!self.out[u].is_empty() || !self.inc[u].is_empty()) {
                return false;
            }
            for &(v, w) in &self.out[u] {
                if v == u || !self.alive[v] {
                    return false;
                }
                let back = self.inc[v].binary_search_by_key(&u, |e| e.0);
                if back.map(|i| self.inc[v][i].1) != Ok(w) {
                    return false;
                }
            }
        }
        let ins: usize = self.inc.iter().map(Vec::len).sum();
        ins == self.edge_count()
    }
}

fn upsert_min(list: &mut Vec<(NodeId, Weight)>, v: NodeId, w: Weight) {
    match list.binary_search_by_key(&v, |e| e.0) {
        Ok(i) => list[i].1 = list[i].1.min(w),
        Err(i) => list.insert(i, (v, w)),
    }
}

/// Expresses an edge-level change as node updates: delete `u` and re-insert
/// it under `fresh_id` with its current edges, where edge `u -> v` is set to
/// `weight` (or removed when `None`).
pub fn edge_update_as_node_events(
    g: &Graph,
    u: NodeId,
    v: NodeId,
    weight: Option<Weight>,
    fresh_id: NodeId,
) -> Result<[UpdateEvent; 2]> {
    if !g.is_alive(u) {
        return Err(Error::DeleteMissing(u));
    }
    if !g.is_alive(v) || u == v {
        return Err(Error::EdgeToDeadNode(v));
    }
    let in_edges = g.in_edges(u).to_vec();
    let mut out_edges: Vec<(NodeId, Weight)> = g.out_edges(u).iter().copied().filter(|e| e.0 != v).collect();
    if let Some(w) = weight {
        out_edges.push((v, w));
        out_edges.sort_unstable();
    }
    Ok([
        UpdateEvent::DeleteNode { node: u },
        UpdateEvent::InsertNode {
            node: fresh_id,
            in_edges,
            out_edges,
        },
    ])
}
