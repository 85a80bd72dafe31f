//! Single-source kernels: hop-bounded Bellman-Ford, Dijkstra and
//! depth-bounded BFS, all producing a [`HopTree`].
//!
//! Minimum-weight `<= h` hop paths are not prefix-closed: the best `<= h`
//! hop path to `x` may extend a prefix that is not the best `<= h` hop path
//! to its predecessor. A [`HopTree`] therefore records one entry per label
//! *state* (node, hop count) and links each state to the predecessor state it
//! was derived from. Following those links always telescopes exactly.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight, INFINITY, NONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Paths `root -> x`; links point to the predecessor.
    FromRoot,
    /// Paths `x -> root`; links point to the successor.
    ToRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeEntry {
    pub node: u32,
    pub hops: u32,
    pub dist: Weight,
    /// Entry index of the neighbouring state closer to the root, `u32::MAX`
    /// for the root entry.
    pub parent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HopTree {
    root: NodeId,
    direction: Direction,
    hop_limit: usize,
    /// Root first; every parent precedes its children.
    entries: Vec<TreeEntry>,
    /// Final entry per node.
    last: Vec<u32>,
    relaxations: u64,
}

impl HopTree {
    fn with_root(n: usize, root: NodeId, direction: Direction, hop_limit: usize) -> Self {
        let mut last = vec![NONE; n];
        last[root] = 0;
        HopTree {
            root,
            direction,
            hop_limit,
            entries: vec![TreeEntry {
                node: root as u32,
                hops: 0,
                dist: 0,
                parent: NONE,
            }],
            last,
            relaxations: 0,
        }
    }

    fn push(&mut self, node: u32, hops: u32, dist: Weight, parent: u32) -> u32 {
        let idx = self.entries.len() as u32;
        self.entries.push(TreeEntry {
            node,
            hops,
            dist,
            parent,
        });
        self.last[node as usize] = idx;
        idx
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn hop_limit(&self) -> usize {
        self.hop_limit
    }

    /// Number of node slots (the graph capacity the tree was computed on).
    pub fn len(&self) -> usize {
        self.last.len()
    }

    pub fn is_empty(&self) -> bool {
        self.last.is_empty()
    }

    pub fn entries(&self) -> &[TreeEntry] {
        &self.entries
    }

    pub fn relaxations(&self) -> u64 {
        self.relaxations
    }

    pub fn final_entry(&self, x: NodeId) -> Option<usize> {
        match self.last.get(x) {
            Some(&e) if e != NONE => Some(e as usize),
            _ => None,
        }
    }

    pub fn reaches(&self, x: NodeId) -> bool {
        self.final_entry(x).is_some()
    }

    pub fn dist(&self, x: NodeId) -> Weight {
        self.final_entry(x).map_or(INFINITY, |e| self.entries[e].dist)
    }

    pub fn hops(&self, x: NodeId) -> Option<usize> {
        self.final_entry(x).map(|e| self.entries[e].hops as usize)
    }

    /// Neighbour of `x` on its stored path: predecessor for
    /// [`Direction::FromRoot`], successor for [`Direction::ToRoot`].
    pub fn link(&self, x: NodeId) -> Option<NodeId> {
        let e = self.final_entry(x)?;
        let p = self.entries[e].parent;
        (p != NONE).then(|| self.entries[p as usize].node as NodeId)
    }

    /// Entry indices along the stored path of `x`, starting at `x` and ending
    /// at the root.
    pub fn path_entries(&self, x: NodeId) -> impl Iterator<Item = usize> + '_ {
        let mut cur = self.final_entry(x).map_or(NONE, |e| e as u32);
        std::iter::from_fn(move || {
            if cur == NONE {
                return None;
            }
            let e = cur as usize;
            cur = self.entries[e].parent;
            Some(e)
        })
    }

    /// For each node, the node adjacent to the root on its stored path
    /// (`NONE` for the root and unreachable nodes). On a `FromRoot` tree this
    /// is the first hop out of the root.
    pub(crate) fn root_branches(&self) -> Vec<u32> {
        let mut head = vec![NONE; self.entries.len()];
        for (i, e) in self.entries.iter().enumerate().skip(1) {
            head[i] = if e.parent == 0 { e.node } else { head[e.parent as usize] };
        }
        self.last
            .iter()
            .map(|&e| if e == NONE { NONE } else { head[e as usize] })
            .collect()
    }

    pub fn dist_vec(&self) -> Vec<Weight> {
        (0..self.len()).map(|x| self.dist(x)).collect()
    }

    pub(crate) fn hops_vec(&self) -> Vec<u32> {
        self.last
            .iter()
            .map(|&e| if e == NONE { 0 } else { self.entries[e as usize].hops })
            .collect()
    }

    /// Successor/predecessor of every node, `NONE` where absent.
    pub(crate) fn link_vec(&self) -> Vec<u32> {
        self.last
            .iter()
            .map(|&e| {
                if e == NONE {
                    NONE
                } else {
                    let p = self.entries[e as usize].parent;
                    if p == NONE {
                        NONE
                    } else {
                        self.entries[p as usize].node
                    }
                }
            })
            .collect()
    }
}

/// Node sequence of the stored path of `x`, oriented along the edges
/// (`root .. x` for `FromRoot`, `x .. root` for `ToRoot`).
pub fn extract_path(tree: &HopTree, x: NodeId) -> Result<Vec<NodeId>> {
    if !tree.reaches(x) {
        return Err(Error::Unreachable(x));
    }
    let mut nodes: Vec<NodeId> = tree.path_entries(x).map(|e| tree.entries[e].node as NodeId).collect();
    if tree.direction == Direction::FromRoot {
        nodes.reverse();
    }
    Ok(nodes)
}

fn check_root(g: &Graph, root: NodeId, excluded: &[bool]) -> Result<()> {
    if !g.is_alive(root) {
        return Err(Error::RootDead(root));
    }
    if excluded.get(root).copied().unwrap_or(false) {
        return Err(Error::RootExcluded(root));
    }
    Ok(())
}

fn adjacency(g: &Graph, x: NodeId, direction: Direction) -> &[(NodeId, Weight)] {
    match direction {
        Direction::FromRoot => g.out_edges(x),
        Direction::ToRoot => g.in_edges(x),
    }
}

/// Exact `<= h` hop distances from/to `root` in `g` with the edges of
/// `excluded` nodes removed. Round `k` only relaxes edges out of states
/// created in round `k - 1`, so labels after round `k` are exactly the
/// `<= k` hop optima. Ties resolve by (weight, hops, predecessor id).
pub fn bounded_hop_sssp(g: &Graph, root: NodeId, h: usize, direction: Direction, excluded: &[bool]) -> Result<HopTree> {
    check_root(g, root, excluded)?;
    let n = g.capacity();
    let is_excluded = |v: NodeId| excluded.get(v).copied().unwrap_or(false);
    let mut tree = HopTree::with_root(n, root, direction, h);

    let mut best = vec![INFINITY; n];
    best[root] = 0;
    let mut cand_w = vec![INFINITY; n];
    let mut cand_pred = vec![NONE; n];
    let mut cand_entry = vec![NONE; n];
    let mut stamp = vec![0u32; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut frontier: Vec<u32> = vec![0];
    let mut relax = 0u64;

    for round in 1..=h as u32 {
        if frontier.is_empty() {
            break;
        }
        touched.clear();
        for &e in &frontier {
            let TreeEntry { node: x, dist: dx, .. } = tree.entries[e as usize];
            for &(y, w) in adjacency(g, x as NodeId, direction) {
                if y == root || is_excluded(y) {
                    continue;
                }
                relax += 1;
                let c = dx + w;
                if c >= best[y] {
                    continue;
                }
                if stamp[y] != round {
                    stamp[y] = round;
                    touched.push(y as u32);
                    cand_w[y] = c;
                    cand_pred[y] = x;
                    cand_entry[y] = e;
                } else if (c, x) < (cand_w[y], cand_pred[y]) {
                    cand_w[y] = c;
                    cand_pred[y] = x;
                    cand_entry[y] = e;
                }
            }
        }
        touched.sort_unstable();
        frontier.clear();
        for &y in &touched {
            let yu = y as usize;
            best[yu] = cand_w[yu];
            let idx = tree.push(y, round, cand_w[yu], cand_entry[yu]);
            frontier.push(idx);
        }
    }
    tree.relaxations = relax;
    Ok(tree)
}

/// Depth-bounded BFS; output is identical to [`bounded_hop_sssp`] on a
/// unit-weight graph.
pub fn bfs_depth(g: &Graph, root: NodeId, h: usize, direction: Direction, excluded: &[bool]) -> Result<HopTree> {
    if let Some((u, v, w)) = g.edges().find(|e| e.2 != 1) {
        return Err(Error::WeightedInput {
            from: u,
            to: v,
            weight: w,
        });
    }
    check_root(g, root, excluded)?;
    let n = g.capacity();
    let is_excluded = |v: NodeId| excluded.get(v).copied().unwrap_or(false);
    let mut tree = HopTree::with_root(n, root, direction, h);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut frontier: Vec<u32> = vec![0];
    let mut next: Vec<(u32, u32)> = Vec::new();
    let mut relax = 0u64;

    for depth in 1..=h as u32 {
        if frontier.is_empty() {
            break;
        }
        next.clear();
        // frontier entries are in ascending node order, so the first
        // discovery of a node comes from its smallest-id parent
        for &e in &frontier {
            let x = tree.entries[e as usize].node as NodeId;
            for &(y, _) in adjacency(g, x, direction) {
                if y == root || is_excluded(y) {
                    continue;
                }
                relax += 1;
                if !seen[y] {
                    seen[y] = true;
                    next.push((y as u32, e));
                }
            }
        }
        next.sort_unstable();
        frontier.clear();
        for &(y, parent) in &next {
            frontier.push(tree.push(y, depth, depth as Weight, parent));
        }
    }
    tree.relaxations = relax;
    Ok(tree)
}

fn dijkstra_core<F>(n: usize, root: NodeId, direction: Direction, mut for_each: F) -> HopTree
where
    F: FnMut(NodeId, &mut dyn FnMut(NodeId, Weight)),
{
    let mut tree = HopTree::with_root(n, root, direction, n);
    tree.last[root] = NONE;
    tree.entries.clear();

    let mut dist = vec![INFINITY; n];
    let mut hops = vec![u32::MAX; n];
    let mut pred = vec![NONE; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[root] = 0;
    hops[root] = 0;
    heap.push(Reverse((0 as Weight, 0u32, root as u32)));
    let mut relax = 0u64;

    while let Some(Reverse((d, h, x))) = heap.pop() {
        let xu = x as usize;
        if done[xu] || (d, h) != (dist[xu], hops[xu]) {
            continue;
        }
        done[xu] = true;
        let parent = if pred[xu] == NONE {
            NONE
        } else {
            tree.last[pred[xu] as usize]
        };
        tree.push(x, h, d, parent);
        for_each(xu, &mut |y, w| {
            if done[y] {
                return;
            }
            relax += 1;
            let cand = (d + w, h + 1, x);
            if cand < (dist[y], hops[y], pred[y]) {
                let key_changed = (cand.0, cand.1) != (dist[y], hops[y]);
                dist[y] = cand.0;
                hops[y] = cand.1;
                pred[y] = x;
                if key_changed {
                    heap.push(Reverse((cand.0, cand.1, y as u32)));
                }
            }
        });
    }
    tree.relaxations = relax;
    tree
}

/// Dijkstra over an explicit edge list on nodes `0..n`. Ties resolve by
/// (hops, predecessor id).
pub fn dijkstra_sssp(
    n: usize,
    edges: &[(NodeId, NodeId, Weight)],
    root: NodeId,
    direction: Direction,
) -> Result<HopTree> {
    if root >= n {
        return Err(Error::RootDead(root));
    }
    let mut start = vec![0u32; n + 1];
    for &(u, v, w) in edges {
        if w < 0 {
            return Err(Error::NegativeEdge {
                from: u,
                to: v,
                weight: w,
            });
        }
        let tail = if direction == Direction::FromRoot { u } else { v };
        start[tail + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut adj = vec![(0u32, 0 as Weight); edges.len()];
    for &(u, v, w) in edges {
        let (tail, head) = if direction == Direction::FromRoot {
            (u, v)
        } else {
            (v, u)
        };
        adj[fill[tail] as usize] = (head as u32, w);
        fill[tail] += 1;
    }
    Ok(dijkstra_core(n, root, direction, |x, f| {
        for &(y, w) in &adj[start[x] as usize..start[x + 1] as usize] {
            f(y as NodeId, w);
        }
    }))
}

/// Dijkstra on `g` minus the `excluded` nodes. Requires non-negative weights.
pub fn dijkstra_graph(g: &Graph, root: NodeId, direction: Direction, excluded: &[bool]) -> Result<HopTree> {
    check_root(g, root, excluded)?;
    let is_excluded = |v: NodeId| excluded.get(v).copied().unwrap_or(false);
    if let Some((u, v, w)) = g.edges().find(|e| e.2 < 0) {
        return Err(Error::NegativeEdge {
            from: u,
            to: v,
            weight: w,
        });
    }
    Ok(dijkstra_core(g.capacity(), root, direction, |x, f| {
        for &(y, w) in adjacency(g, x, direction) {
            if !is_excluded(y) {
                f(y, w);
            }
        }
    }))
}
