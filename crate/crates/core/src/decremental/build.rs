use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::hash::{Hash, Hasher};

use super::{CandidateLists, DecrementalStructure, Layer, VisitRecord};
use crate::dynamic::johnson_potentials;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight, INFINITY, NONE};
use crate::sampling::{sample_centers, SamplerConfig};
use crate::sssp::{bfs_depth, bounded_hop_sssp, Direction};
use crate::stats::Work;
use crate::view::DistanceView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    BellmanFord,
    /// Unit-weight graphs only.
    Bfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Levels `1..=ceil(log2 n)` with hop bounds `2^i` and sampled centers.
    Hierarchy,
    /// One level with the given hop bound; every node is a center.
    Deterministic { hop: usize },
    /// The single level `i` of the hierarchy.
    Level(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildSpec {
    pub c: f64,
    pub seed: u64,
    /// Distinguishes successive builds of one engine; selects the random
    /// sub-streams.
    pub epoch: u64,
    pub kernel: Kernel,
    pub shape: Shape,
}

impl Eq for BuildSpec {}

impl Hash for BuildSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.to_bits().hash(state);
        self.seed.hash(state);
        self.epoch.hash(state);
        self.kernel.hash(state);
        self.shape.hash(state);
    }
}

impl BuildSpec {
    pub fn randomized(c: f64, seed: u64) -> Self {
        BuildSpec {
            c,
            seed,
            epoch: 0,
            kernel: Kernel::BellmanFord,
            shape: Shape::Hierarchy,
        }
    }

    /// Sub-stream index for the centers of `level` in this build.
    pub fn stream(&self, level: u32) -> u64 {
        (self.epoch << 8) | u64::from(level)
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub(crate) fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

struct LayerPlan {
    level: u32,
    hop: usize,
    centers: Vec<u32>,
    lists: bool,
}

fn plan_layers(n: usize, spec: &BuildSpec) -> Result<Vec<LayerPlan>> {
    let cfg = SamplerConfig::new(spec.c, spec.seed, n)?;
    let all: Vec<NodeId> = (0..n).collect();
    let sampled = |level: u32| -> Vec<u32> {
        sample_centers(&cfg, 1usize << level, &all, spec.stream(level))
            .into_iter()
            .map(|v| v as u32)
            .collect()
    };
    let plans = match spec.shape {
        Shape::Hierarchy => (1..=ceil_log2(n))
            .map(|i| LayerPlan {
                level: i,
                hop: 1 << i,
                centers: sampled(i),
                lists: (1usize << (2 * i)) <= n,
            })
            .collect(),
        Shape::Deterministic { hop } => vec![LayerPlan {
            level: 0,
            hop: hop.max(1),
            centers: (0..n as u32).collect(),
            lists: true,
        }],
        Shape::Level(i) => vec![LayerPlan {
            level: i,
            hop: 1 << i,
            centers: sampled(i),
            lists: true,
        }],
    };
    if n > usize::from(u16::MAX) + 1 {
        return Err(Error::TooLarge(n));
    }
    Ok(plans)
}

/// Number of visits the alternation performs for the given center count.
fn visit_count(n: usize, centers: usize) -> usize {
    centers + centers.min(n - centers)
}

/// Max-congestion selection over centers and non-centers, ties to the
/// smaller id. Counters only grow, so stale heap entries are skipped lazily.
struct Scheduler {
    centers: BinaryHeap<(u64, Reverse<u32>)>,
    others: BinaryHeap<(u64, Reverse<u32>)>,
    expect_center: bool,
    centers_left: usize,
    others_left: usize,
}

impl Scheduler {
    fn new(layer: &Layer) -> Self {
        let n = layer.rank.len();
        let mut s = Scheduler {
            centers: BinaryHeap::new(),
            others: BinaryHeap::new(),
            expect_center: true,
            centers_left: layer.centers.len(),
            others_left: n - layer.centers.len(),
        };
        for v in 0..n {
            s.push(layer, v);
        }
        s
    }

    fn push(&mut self, layer: &Layer, v: NodeId) {
        if layer.visited[v] {
            return;
        }
        let key = (layer.congestion[v], Reverse(v as u32));
        if layer.is_center[v] {
            self.centers.push(key);
        } else {
            self.others.push(key);
        }
    }

    fn pop(heap: &mut BinaryHeap<(u64, Reverse<u32>)>, layer: &Layer) -> Option<NodeId> {
        while let Some((c, Reverse(v))) = heap.pop() {
            let v = v as usize;
            if !layer.visited[v] && c == layer.congestion[v] {
                return Some(v);
            }
        }
        None
    }

    fn next(&mut self, layer: &Layer) -> Option<NodeId> {
        if self.expect_center {
            if self.centers_left == 0 {
                return None;
            }
            self.centers_left -= 1;
            self.expect_center = self.others_left == 0;
            Self::pop(&mut self.centers, layer)
        } else {
            self.others_left -= 1;
            self.expect_center = true;
            Self::pop(&mut self.others, layer)
        }
    }
}

impl Layer {
    /// Visits `v`: trees in the graph without previously visited nodes,
    /// congestion update, rank assignment. Returns the work and the nodes
    /// whose counters changed.
    fn visit_tracked(
        &mut self,
        g: &Graph,
        v: NodeId,
        kernel: Kernel,
        stamp: &mut [u64],
        tick: &mut u64,
    ) -> Result<(Work, Vec<u32>)> {
        if self.visited[v] {
            return Err(Error::AlreadyVisited(v));
        }
        let run = |dir| match kernel {
            Kernel::BellmanFord => bounded_hop_sssp(g, v, self.hop, dir, &self.visited),
            Kernel::Bfs => bfs_depth(g, v, self.hop, dir, &self.visited),
        };
        let to_tree = run(Direction::ToRoot)?;
        let from_tree = run(Direction::FromRoot)?;
        let work = Work {
            relaxations: to_tree.relaxations() + from_tree.relaxations(),
            ..Work::default()
        };

        self.rank[v] = self.visits.len() as u32;
        self.visited[v] = true;

        let mut touched = Vec::new();
        for x in 0..g.capacity() {
            if !to_tree.reaches(x) && !from_tree.reaches(x) {
                continue;
            }
            *tick += 1;
            for tree in [&to_tree, &from_tree] {
                for e in tree.path_entries(x) {
                    let u = tree.entries()[e].node as usize;
                    if u == v || stamp[u] == *tick {
                        continue;
                    }
                    stamp[u] = *tick;
                    touched.push(u as u32);
                    self.congestion[u] += 1;
                }
            }
        }
        touched.sort_unstable();
        touched.dedup();
        self.visits.push(VisitRecord::new(v, to_tree, from_tree));
        Ok((work, touched))
    }

    /// Single visit outside the scheduled build.
    pub fn visit(&mut self, g: &Graph, v: NodeId, kernel: Kernel) -> Result<Work> {
        let mut stamp = vec![0u64; g.capacity()];
        let mut tick = 0;
        self.visit_tracked(g, v, kernel, &mut stamp, &mut tick).map(|r| r.0)
    }

    /// Candidate list rows of source `s`, appended in pair order.
    fn build_list_row(&mut self, s: NodeId, work: &mut Work) {
        let n = self.rank.len();
        let lists = self.lists.get_or_insert_with(|| CandidateLists {
            offsets: vec![0],
            ranks: Vec::new(),
        });
        let heads: Vec<(u16, Weight, u32)> = self
            .visits
            .iter()
            .enumerate()
            .filter(|(_, r)| r.to_dist[s] != INFINITY)
            .map(|(k, r)| (k as u16, r.to_dist[s], r.to_hops[s]))
            .collect();
        let mut buf: Vec<(Weight, u32, u16)> = Vec::with_capacity(heads.len());
        for t in 0..n {
            if t != s {
                buf.clear();
                for &(k, d, h) in &heads {
                    let r = &self.visits[k as usize];
                    let d2 = r.from_dist[t];
                    if d2 != INFINITY {
                        buf.push((d + d2, h + r.from_hops[t], k));
                    }
                }
                work.relaxations += heads.len() as u64;
                buf.sort_unstable();
                lists.ranks.extend(buf.iter().map(|e| e.2));
            }
            lists.offsets.push(lists.ranks.len() as u32);
        }
    }

    /// Minimum stored through-value for `(s, t)` over all visits.
    fn best_through(&self, s: NodeId, t: NodeId, work: &mut Work) -> (Weight, u32, u32) {
        let mut best = (INFINITY, 0, NONE);
        if self.lists.is_some() {
            if let Some(&k) = self.candidates(s, t).first() {
                work.relaxations += 1;
                best = self.visits[k as usize]
                    .through(s, t)
                    .expect("listed candidate is finite");
            }
        } else {
            for r in &self.visits {
                work.relaxations += 1;
                if let Some(c) = r.through(s, t) {
                    if (c.0, c.1) < (best.0, best.1) {
                        best = c;
                    }
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Potentials,
    Visit(usize),
    Lists(usize, usize),
    Base(usize),
    Done,
}

/// A build that can be advanced one unit at a time. Units are: computing
/// potentials, one visit, one candidate-list row, one base-matrix row.
pub struct StagedBuild {
    spec: BuildSpec,
    ids: Vec<NodeId>,
    source: Graph,
    reweight: bool,
    snapshot: Option<Graph>,
    potentials: Vec<Weight>,
    layers: Vec<Layer>,
    lists_wanted: Vec<bool>,
    scheduler: Option<Scheduler>,
    stamp: Vec<u64>,
    tick: u64,
    base: DistanceView,
    stage: Stage,
    total: usize,
    done: usize,
}

impl StagedBuild {
    /// Prepares a build of `g` (alive nodes only). With `reweight`, Johnson
    /// potentials make the weights non-negative; without it negative weights
    /// are rejected.
    pub fn new(g: &Graph, spec: BuildSpec, reweight: bool) -> Result<Self> {
        if !reweight && g.has_negative_edge() {
            return Err(Error::NegativeWeight);
        }
        if spec.kernel == Kernel::Bfs {
            if let Some((u, v, w)) = g.edges().find(|e| e.2 != 1) {
                return Err(Error::WeightedInput {
                    from: u,
                    to: v,
                    weight: w,
                });
            }
        }
        let (source, ids) = g.compact();
        let n = ids.len();
        let plans = plan_layers(n, &spec)?;
        let total = 1
            + plans.iter().map(|p| visit_count(n, p.centers.len())).sum::<usize>()
            + plans.iter().filter(|p| p.lists).count() * n
            + n;
        let lists_wanted = plans.iter().map(|p| p.lists).collect();
        let layers = plans
            .into_iter()
            .map(|p| Layer::new(p.level, p.hop, p.centers, n))
            .collect();
        Ok(StagedBuild {
            spec,
            base: DistanceView::unreachable((0..n).collect()),
            ids,
            source,
            reweight,
            snapshot: None,
            potentials: vec![0; n],
            layers,
            lists_wanted,
            scheduler: None,
            stamp: vec![0; n],
            tick: 0,
            stage: Stage::Potentials,
            total,
            done: 0,
        })
    }

    pub fn total_units(&self) -> usize {
        self.total
    }

    pub fn done_units(&self) -> usize {
        self.done
    }

    pub fn is_done(&self) -> bool {
        self.stage == Stage::Done
    }

    /// Original ids of the snapshot being built, in local order.
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    fn after_layer(&self, li: usize) -> Stage {
        if li + 1 < self.layers.len() {
            Stage::Visit(li + 1)
        } else if self.ids.is_empty() {
            Stage::Done
        } else {
            Stage::Base(0)
        }
    }

    /// Executes one unit. No-op once done.
    pub fn step(&mut self) -> Result<Work> {
        let n = self.ids.len();
        let mut work = Work::default();
        loop {
            match self.stage {
                Stage::Done => return Ok(work),
                Stage::Potentials => {
                    let g = if self.reweight && self.source.has_negative_edge() {
                        let (p, w) = johnson_potentials(&self.source)?;
                        work.relaxations += w;
                        let g = self.source.map_weights(|u, v, x| x + p[u] - p[v]);
                        self.potentials = p;
                        g
                    } else {
                        self.source.clone()
                    };
                    self.snapshot = Some(g);
                    self.stage = if self.layers.is_empty() {
                        self.after_layer(0)
                    } else {
                        Stage::Visit(0)
                    };
                    break;
                }
                Stage::Visit(li) => {
                    let layer = &mut self.layers[li];
                    let sched = self.scheduler.get_or_insert_with(|| Scheduler::new(layer));
                    match sched.next(layer) {
                        Some(v) => {
                            let g = self.snapshot.as_ref().expect("potentials computed");
                            let (w, touched) =
                                layer.visit_tracked(g, v, self.spec.kernel, &mut self.stamp, &mut self.tick)?;
                            for u in touched {
                                sched.push(layer, u as usize);
                            }
                            work += w;
                            break;
                        }
                        None => {
                            self.scheduler = None;
                            self.stage = if self.lists_wanted[li] && n > 0 {
                                Stage::Lists(li, 0)
                            } else {
                                self.after_layer(li)
                            };
                        }
                    }
                }
                Stage::Lists(li, s) => {
                    self.layers[li].build_list_row(s, &mut work);
                    self.stage = if s + 1 < n {
                        Stage::Lists(li, s + 1)
                    } else {
                        self.after_layer(li)
                    };
                    break;
                }
                Stage::Base(s) => {
                    for t in 0..n {
                        if t == s {
                            continue;
                        }
                        for layer in &self.layers {
                            let (d, h, f) = layer.best_through(s, t, &mut work);
                            if d != INFINITY {
                                self.base.improve_local(s, t, d, h, f);
                            }
                        }
                    }
                    self.stage = if s + 1 < n { Stage::Base(s + 1) } else { Stage::Done };
                    break;
                }
            }
        }
        self.done += 1;
        Ok(work)
    }

    /// Runs every remaining unit.
    pub fn finish(mut self) -> Result<(DecrementalStructure, Work)> {
        let mut work = Work::default();
        while !self.is_done() {
            work += self.step()?;
        }
        Ok((self.into_structure(), work))
    }

    /// The completed structure. Panics if units remain.
    pub fn into_structure(self) -> DecrementalStructure {
        assert!(self.is_done(), "build has {} units left", self.total - self.done);
        let cap = self.ids.iter().map(|&v| v + 1).max().unwrap_or(0);
        let mut local = vec![NONE; cap];
        for (i, &v) in self.ids.iter().enumerate() {
            local[v] = i as u32;
        }
        DecrementalStructure {
            spec: self.spec,
            ids: self.ids,
            local,
            snapshot: self.snapshot.expect("potentials computed"),
            potentials: self.potentials,
            layers: self.layers,
            base: self.base,
        }
    }
}

/// Full randomized preprocessing of a non-negative graph.
pub fn preprocess(g: &Graph, c: f64, seed: u64) -> Result<DecrementalStructure> {
    StagedBuild::new(g, BuildSpec::randomized(c, seed), false)?
        .finish()
        .map(|r| r.0)
}

/// Deterministic single-level preprocessing: every node is visited, most
/// congested first.
pub fn preprocess_det(g: &Graph, hop: usize) -> Result<DecrementalStructure> {
    let spec = BuildSpec {
        c: 1.0,
        seed: 0,
        epoch: 0,
        kernel: Kernel::BellmanFord,
        shape: Shape::Deterministic { hop },
    };
    StagedBuild::new(g, spec, false)?.finish().map(|r| r.0)
}
