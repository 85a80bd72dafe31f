use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::StreamRecord;
use crate::graph::{Graph, NodeId, UpdateEvent, Weight, INFINITY};
use crate::oracle::apsp_oracle;
use crate::sampling::stream_rng;

const GRAPH_STREAM: u64 = 0x6772_6170;
const EVENT_STREAM: u64 = 0x6576_656e;
const INSERT_ATTEMPTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Adversary {
    /// The whole sequence is fixed in advance.
    Oblivious,
    /// Deletes a random interior node of a path the engine just returned.
    PathAttacker,
    /// Deletes the interior node seen most often across many returned paths.
    CenterHunter,
}

/// Parameters of a random workload. Ratios are relative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub n: usize,
    /// Probability of each ordered pair being an edge, also used for the
    /// edges declared by inserted nodes.
    pub density: f64,
    pub weight_min: Weight,
    pub weight_max: Weight,
    pub updates: usize,
    pub insert_ratio: f64,
    pub delete_ratio: f64,
    pub query_ratio: f64,
    pub adversary: Adversary,
    pub seed: u64,
}

impl WorkloadSpec {
    /// Non-negative weights `0..=100`, equal insert and delete ratios.
    pub fn mixed(n: usize, density: f64, updates: usize, seed: u64) -> Self {
        WorkloadSpec {
            n,
            density,
            weight_min: 0,
            weight_max: 100,
            updates,
            insert_ratio: 1.0,
            delete_ratio: 1.0,
            query_ratio: 0.0,
            adversary: Adversary::Oblivious,
            seed,
        }
    }

    pub fn with_weights(mut self, lo: Weight, hi: Weight) -> Self {
        self.weight_min = lo;
        self.weight_max = hi;
        self
    }

    pub fn with_ratios(mut self, insert: f64, delete: f64, query: f64) -> Self {
        self.insert_ratio = insert;
        self.delete_ratio = delete;
        self.query_ratio = query;
        self
    }

    pub fn with_adversary(mut self, a: Adversary) -> Self {
        self.adversary = a;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::SpecInvalid(m.to_string()));
        if !(0.0..=1.0).contains(&self.density) {
            return bad("density must lie in [0, 1]");
        }
        if self.weight_min > self.weight_max {
            return bad("empty weight range");
        }
        let ratios = [self.insert_ratio, self.delete_ratio, self.query_ratio];
        if ratios.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return bad("ratios must be finite and non-negative");
        }
        if self.updates > 0 && self.insert_ratio + self.delete_ratio <= 0.0 {
            return bad("updates requested but insert and delete ratios are zero");
        }
        let max_abs = self.weight_min.saturating_abs().max(self.weight_max.saturating_abs());
        crate::graph::check_headroom(self.n + self.updates, max_abs)
    }

    fn weight(&self, rng: &mut ChaCha8Rng) -> Weight {
        rng.gen_range(self.weight_min..=self.weight_max)
    }

    fn has_negative(&self) -> bool {
        self.weight_min < 0
    }

    /// Edges of a node about to be inserted, each alive node independently
    /// with probability `density` per direction.
    pub fn draw_insertion(&self, g: &Graph, node: NodeId, rng: &mut ChaCha8Rng) -> UpdateEvent {
        let alive: Vec<NodeId> = g.alive_nodes().collect();
        let mut in_edges = Vec::new();
        let mut out_edges = Vec::new();
        for &u in &alive {
            if rng.gen_bool(self.density) {
                in_edges.push((u, self.weight(rng)));
            }
            if rng.gen_bool(self.density) {
                out_edges.push((u, self.weight(rng)));
            }
        }
        UpdateEvent::InsertNode {
            node,
            in_edges,
            out_edges,
        }
    }

    /// A random insertion that keeps `g` free of negative cycles; after
    /// repeated rejections the negative declarations are dropped.
    pub fn safe_insertion(&self, g: &Graph, rng: &mut ChaCha8Rng) -> Result<UpdateEvent> {
        let node = g.capacity();
        for _ in 0..INSERT_ATTEMPTS {
            let e = self.draw_insertion(g, node, rng);
            if !self.has_negative() || !apsp_oracle(&g.apply_event(&e)?).negative_cycle {
                return Ok(e);
            }
        }
        let UpdateEvent::InsertNode {
            node,
            mut in_edges,
            mut out_edges,
        } = self.draw_insertion(g, node, rng)
        else {
            unreachable!()
        };
        in_edges.retain(|e| e.1 >= 0);
        out_edges.retain(|e| e.1 >= 0);
        Ok(UpdateEvent::InsertNode {
            node,
            in_edges,
            out_edges,
        })
    }

    /// Generator for the update sequence of this spec.
    pub fn event_rng(&self) -> ChaCha8Rng {
        stream_rng(self.seed, EVENT_STREAM)
    }

    /// Draws whether the next update is an insertion. Deletions turn into
    /// insertions when no node is alive.
    pub fn draw_is_insert(&self, g: &Graph, rng: &mut ChaCha8Rng) -> bool {
        let total = self.insert_ratio + self.delete_ratio;
        g.node_count() == 0 || rng.gen::<f64>() * total < self.insert_ratio
    }
}

/// Random graph: every ordered pair `u != v` is an edge with probability
/// `density`. With negative weights each edge is dropped if it would close a
/// negative cycle; the final graph is screened by the oracle.
pub fn generate_graph(spec: &WorkloadSpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = stream_rng(spec.seed, GRAPH_STREAM);
    let mut edges = Vec::new();
    // dist[u][v] over the edges accepted so far, kept only with negatives
    let mut dist = if spec.has_negative() {
        let mut d = vec![INFINITY; n * n];
        for v in 0..n {
            d[v * n + v] = 0;
        }
        d
    } else {
        Vec::new()
    };
    for u in 0..n {
        for v in 0..n {
            if u == v || !rng.gen_bool(spec.density) {
                continue;
            }
            let w = spec.weight(&mut rng);
            if spec.has_negative() {
                let back = dist[v * n + u];
                if back != INFINITY && back + w < 0 {
                    continue;
                }
                let into_u: Vec<Weight> = (0..n).map(|x| dist[x * n + u]).collect();
                let from_v: Vec<Weight> = dist[v * n..(v + 1) * n].to_vec();
                for (x, &a) in into_u.iter().enumerate() {
                    if a == INFINITY {
                        continue;
                    }
                    for (y, &b) in from_v.iter().enumerate() {
                        if b != INFINITY && a + w + b < dist[x * n + y] {
                            dist[x * n + y] = a + w + b;
                        }
                    }
                }
            }
            edges.push((u, v, w));
        }
    }
    let g = Graph::from_edges(n, &edges)?;
    if spec.has_negative() && apsp_oracle(&g).negative_cycle {
        return Err(Error::InternalInconsistency(
            "generated graph has a negative cycle".into(),
        ));
    }
    Ok(g)
}

/// Oblivious update sequence for `g`. Query records are interleaved by the
/// query ratio and do not count as updates.
pub fn generate_stream(spec: &WorkloadSpec, g: &Graph) -> Result<Vec<StreamRecord>> {
    spec.validate()?;
    if spec.adversary != Adversary::Oblivious {
        return Err(Error::SpecInvalid(
            "adaptive sequences depend on engine answers; generate them with verify".into(),
        ));
    }
    let mut rng = spec.event_rng();
    let mut g = g.clone();
    let mut out = Vec::new();
    let mut done = 0;
    let all = spec.insert_ratio + spec.delete_ratio + spec.query_ratio;
    while done < spec.updates {
        if spec.query_ratio > 0.0 && rng.gen::<f64>() * all < spec.query_ratio {
            let alive: Vec<NodeId> = g.alive_nodes().collect();
            if !alive.is_empty() {
                let s = alive[rng.gen_range(0..alive.len())];
                let t = alive[rng.gen_range(0..alive.len())];
                out.push(if rng.gen_bool(0.5) {
                    StreamRecord::Query(s, t)
                } else {
                    StreamRecord::PathQuery(s, t)
                });
            }
            continue;
        }
        let e = if spec.draw_is_insert(&g, &mut rng) {
            spec.safe_insertion(&g, &mut rng)?
        } else {
            let alive: Vec<NodeId> = g.alive_nodes().collect();
            UpdateEvent::DeleteNode {
                node: alive[rng.gen_range(0..alive.len())],
            }
        };
        g.apply_in_place(&e)?;
        out.push(StreamRecord::Update(e));
        done += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_updates_is_empty() {
        let spec = WorkloadSpec::mixed(8, 0.3, 0, 1);
        let g = generate_graph(&spec).unwrap();
        assert!(generate_stream(&spec, &g).unwrap().is_empty());
    }

    #[test]
    fn pure_delete_removes_every_node_once() {
        let spec = WorkloadSpec::mixed(8, 0.3, 8, 4).with_ratios(0.0, 1.0, 0.0);
        let g = generate_graph(&spec).unwrap();
        let s = generate_stream(&spec, &g).unwrap();
        let mut seen: Vec<NodeId> = s
            .iter()
            .map(|r| match r {
                StreamRecord::Update(UpdateEvent::DeleteNode { node }) => *node,
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen, (0..8).collect::<Vec<_>>());
        let mut h = g.clone();
        for r in &s {
            if let StreamRecord::Update(e) = r {
                h.apply_in_place(e).unwrap();
            }
        }
    }

    #[test]
    fn negative_workloads_have_no_negative_cycle() {
        for seed in 0..10 {
            let spec = WorkloadSpec::mixed(24, 0.2, 20, seed).with_weights(-20, 100);
            let mut g = generate_graph(&spec).unwrap();
            assert!(!apsp_oracle(&g).negative_cycle);
            assert!(g.has_negative_edge());
            for r in generate_stream(&spec, &g).unwrap() {
                if let StreamRecord::Update(e) = r {
                    g.apply_in_place(&e).unwrap();
                    assert!(!apsp_oracle(&g).negative_cycle);
                }
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = WorkloadSpec::mixed(16, 0.2, 30, 9).with_ratios(1.0, 1.0, 0.5);
        let g = generate_graph(&spec).unwrap();
        assert_eq!(g, generate_graph(&spec).unwrap());
        assert_eq!(generate_stream(&spec, &g).unwrap(), generate_stream(&spec, &g).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = WorkloadSpec::mixed(8, 1.5, 1, 0);
        assert!(matches!(generate_graph(&spec), Err(Error::SpecInvalid(_))));
        spec.density = 0.5;
        spec.weight_min = 5;
        spec.weight_max = 1;
        assert!(matches!(generate_graph(&spec), Err(Error::SpecInvalid(_))));
    }
}
