//! Dense distance matrix with first-hop successors.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight, INFINITY, NONE};

/// All-pairs distances over a node set. Entries are ordered by
/// `(dist, hops)`; `first(s, t)` is the successor of `s` on a stored
/// `s -> t` path whose suffix has exactly one hop fewer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceView {
    nodes: Vec<NodeId>,
    index: Vec<u32>,
    dist: Vec<Weight>,
    hops: Vec<u32>,
    first: Vec<u32>,
}

impl DistanceView {
    /// View over `nodes` with only the zero diagonal set.
    pub fn unreachable(nodes: Vec<NodeId>) -> Self {
        let n = nodes.len();
        let cap = nodes.iter().map(|&v| v + 1).max().unwrap_or(0);
        let mut index = vec![NONE; cap];
        for (i, &v) in nodes.iter().enumerate() {
            index[v] = i as u32;
        }
        let mut dist = vec![INFINITY; n * n];
        for i in 0..n {
            dist[i * n + i] = 0;
        }
        DistanceView {
            nodes,
            index,
            dist,
            hops: vec![0; n * n],
            first: vec![NONE; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in local index order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn local(&self, v: NodeId) -> Option<usize> {
        match self.index.get(v) {
            Some(&i) if i != NONE => Some(i as usize),
            _ => None,
        }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.local(v).is_some()
    }

    /// Distance between two node ids; [`INFINITY`] when either is absent.
    pub fn dist(&self, s: NodeId, t: NodeId) -> Weight {
        match (self.local(s), self.local(t)) {
            (Some(i), Some(j)) => self.dist[i * self.len() + j],
            _ => INFINITY,
        }
    }

    /// Hop count of the stored path, `None` when unreachable.
    pub fn hops(&self, s: NodeId, t: NodeId) -> Option<usize> {
        let (i, j) = (self.local(s)?, self.local(t)?);
        let k = i * self.len() + j;
        (self.dist[k] != INFINITY).then_some(self.hops[k] as usize)
    }

    /// Successor of `s` on the stored `s -> t` path.
    pub fn first_edge(&self, s: NodeId, t: NodeId) -> Option<NodeId> {
        let (i, j) = (self.local(s)?, self.local(t)?);
        let f = self.first[i * self.len() + j];
        (f != NONE).then(|| self.nodes[f as usize])
    }

    /// Walks first-hop successors from `s` to `t`.
    pub fn path(&self, s: NodeId, t: NodeId) -> Result<Vec<NodeId>> {
        let (mut i, j) = match (self.local(s), self.local(t)) {
            (Some(i), Some(j)) => (i, j),
            (None, _) => return Err(Error::DeadEndpoint(s)),
            (_, None) => return Err(Error::DeadEndpoint(t)),
        };
        let n = self.len();
        if self.dist[i * n + j] == INFINITY {
            return Err(Error::PathUnavailable(s, t));
        }
        let mut path = vec![s];
        while i != j {
            let f = self.first[i * n + j];
            if f == NONE || path.len() > n {
                return Err(Error::InternalInconsistency(format!(
                    "first-hop walk {s} -> {t} broke at {}",
                    self.nodes[i]
                )));
            }
            i = f as usize;
            path.push(self.nodes[i]);
        }
        Ok(path)
    }

    #[inline]
    pub(crate) fn get_local(&self, i: usize, j: usize) -> (Weight, u32, u32) {
        let k = i * self.len() + j;
        (self.dist[k], self.hops[k], self.first[k])
    }

    #[inline]
    pub(crate) fn set_local(&mut self, i: usize, j: usize, d: Weight, h: u32, f: u32) {
        let k = i * self.len() + j;
        self.dist[k] = d;
        self.hops[k] = h;
        self.first[k] = f;
    }

    /// Replaces `(i, j)` when `(d, h)` is lexicographically smaller.
    #[inline]
    pub(crate) fn improve_local(&mut self, i: usize, j: usize, d: Weight, h: u32, f: u32) -> bool {
        let k = i * self.len() + j;
        if (d, h) < (self.dist[k], self.hops[k]) {
            self.dist[k] = d;
            self.hops[k] = h;
            self.first[k] = f;
            true
        } else {
            false
        }
    }

    /// Adds `shift(i, j)` to every finite entry.
    pub(crate) fn shift_finite(&mut self, shift: impl Fn(usize, usize) -> Weight) {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                if self.dist[k] != INFINITY {
                    self.dist[k] += shift(i, j);
                }
            }
        }
    }

    /// Sub-view of the local indices with `keep[i]`, relabelled so that
    /// local index `i` becomes node `ids[i]`.
    pub(crate) fn restrict(&self, keep: &[bool], ids: &[NodeId]) -> DistanceView {
        let n = self.len();
        let kept: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
        let mut remap = vec![NONE; n];
        for (k, &i) in kept.iter().enumerate() {
            remap[i] = k as u32;
        }
        let mut out = DistanceView::unreachable(kept.iter().map(|&i| ids[i]).collect());
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                let (d, h, f) = self.get_local(i, j);
                let f = if f == NONE { NONE } else { remap[f as usize] };
                out.set_local(a, b, d, h, f);
            }
        }
        out
    }

    /// Checks the first-hop invariant against `g`: every finite off-diagonal
    /// entry names an edge `(s, x)` with `dist(s, t) = w(s, x) + dist(x, t)`
    /// and one hop fewer.
    pub fn check_first_edges(&self, g: &Graph) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let (d, h, f) = self.get_local(i, j);
                if i == j || d == INFINITY {
                    continue;
                }
                let (s, t) = (self.nodes[i], self.nodes[j]);
                let bad = || Error::InternalInconsistency(format!("first hop of ({s}, {t})"));
                if f == NONE {
                    return Err(bad());
                }
                let x = self.nodes[f as usize];
                let w = g.edge_weight(s, x).ok_or_else(bad)?;
                let (dx, hx, _) = self.get_local(f as usize, j);
                if dx == INFINITY || w + dx != d || hx + 1 != h {
                    return Err(bad());
                }
            }
        }
        Ok(())
    }
}
