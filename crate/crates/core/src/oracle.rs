//! Brute-force reference distances by matrix relaxation.
//!
//! Deliberately independent of the queue-based kernels in [`crate::sssp`].

use crate::graph::{Graph, NodeId, Weight, INFINITY};

/// Distances indexed by node id over the full identifier space. Dead ids
/// read as unreachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    n: usize,
    dist: Vec<Weight>,
    hops: Vec<u32>,
    next: Vec<u32>,
    pub negative_cycle: bool,
}

const NO_NEXT: u32 = u32::MAX;

impl OracleResult {
    fn empty(g: &Graph) -> Self {
        let n = g.capacity();
        let mut r = OracleResult {
            n,
            dist: vec![INFINITY; n * n],
            hops: vec![0; n * n],
            next: vec![NO_NEXT; n * n],
            negative_cycle: false,
        };
        for v in g.alive_nodes() {
            r.dist[v * n + v] = 0;
            r.next[v * n + v] = v as u32;
        }
        r
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, s: NodeId, t: NodeId) -> Weight {
        if s >= self.n || t >= self.n {
            return INFINITY;
        }
        self.dist[s * self.n + t]
    }

    /// Minimum edge count among minimum-weight paths.
    pub fn hops(&self, s: NodeId, t: NodeId) -> Option<usize> {
        (self.dist(s, t) != INFINITY).then(|| self.hops[s * self.n + t] as usize)
    }

    /// The minimum-hop shortest path selected by the relaxation order.
    /// Only meaningful for [`apsp_oracle`] results without negative cycles.
    pub fn path(&self, s: NodeId, t: NodeId) -> Option<Vec<NodeId>> {
        if self.dist(s, t) == INFINITY {
            return None;
        }
        let mut p = vec![s];
        let mut cur = s;
        while cur != t {
            let nx = self.next[cur * self.n + t];
            if nx == NO_NEXT || p.len() > self.n {
                return None;
            }
            cur = nx as usize;
            p.push(cur);
        }
        Some(p)
    }
}

/// Floyd-Warshall over alive nodes, ordered by `(weight, hops)`.
pub fn apsp_oracle(g: &Graph) -> OracleResult {
    let mut r = OracleResult::empty(g);
    let n = r.n;
    for (u, v, w) in g.edges() {
        let k = u * n + v;
        r.dist[k] = w;
        r.hops[k] = 1;
        r.next[k] = v as u32;
    }
    let alive: Vec<NodeId> = g.alive_nodes().collect();
    for &k in &alive {
        for &i in &alive {
            let dik = r.dist[i * n + k];
            if dik == INFINITY {
                continue;
            }
            let hik = r.hops[i * n + k];
            let nik = r.next[i * n + k];
            for &j in &alive {
                let dkj = r.dist[k * n + j];
                if dkj == INFINITY {
                    continue;
                }
                let cand = (dik + dkj, hik + r.hops[k * n + j]);
                let ij = i * n + j;
                if cand < (r.dist[ij], r.hops[ij]) {
                    r.dist[ij] = cand.0;
                    r.hops[ij] = cand.1;
                    r.next[ij] = nik;
                }
            }
        }
        if r.dist[k * n + k] < 0 {
            r.negative_cycle = true;
        }
    }
    if alive.iter().any(|&v| r.dist[v * n + v] < 0) {
        r.negative_cycle = true;
    }
    r
}

/// `<= h` hop distances with minimal hop counts, by `h` rounds of
/// `(weight, hops)` matrix relaxation against the edge list.
pub fn hop_oracle(g: &Graph, h: usize) -> OracleResult {
    let mut r = OracleResult::empty(g);
    let n = r.n;
    let edges: Vec<(NodeId, NodeId, Weight)> = g.edges().collect();
    let alive: Vec<NodeId> = g.alive_nodes().collect();
    for _ in 0..h {
        let prev_d = r.dist.clone();
        let prev_h = r.hops.clone();
        for &s in &alive {
            for &(u, v, w) in &edges {
                let d = prev_d[s * n + u];
                if d == INFINITY {
                    continue;
                }
                let cand = (d + w, prev_h[s * n + u] + 1);
                let k = s * n + v;
                if cand < (r.dist[k], r.hops[k]) {
                    r.dist[k] = cand.0;
                    r.hops[k] = cand.1;
                }
            }
        }
    }
    r.negative_cycle = alive.iter().any(|&v| r.dist[v * n + v] < 0);
    r
}
