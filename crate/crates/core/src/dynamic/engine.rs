use super::overlay::{fw_insert_overlay, InsertedNode};
use crate::decremental::{
    batch_delete, batch_delete_det, BuildSpec, DecrementalStructure, Kernel, Shape, StagedBuild, VisitRecord,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, UpdateEvent, Weight, INFINITY};
use crate::sampling::{sample_centers, SamplerConfig};
use crate::sssp::{bfs_depth, Direction};
use crate::stats::Work;
use crate::view::DistanceView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Sampled centers, arbitrary weights without negative cycles.
    RandWeighted,
    /// Unit weights; one rebuild schedule per level, BFS kernels.
    Unweighted,
    /// Every node visited at one hop bound; no randomness.
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub variant: Variant,
    /// Confidence parameter, at least 1.
    pub c: f64,
    pub seed: u64,
    /// Replaces the rebuild period of every schedule.
    pub delta_override: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig::new(Variant::RandWeighted)
    }
}

impl EngineConfig {
    pub fn new(variant: Variant) -> Self {
        EngineConfig {
            variant,
            c: 3.0,
            seed: 0,
            delta_override: None,
        }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta_override = Some(delta);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.c >= 1.0 && self.c.is_finite()) {
            return Err(Error::SpecInvalid(format!("confidence must be >= 1, got {}", self.c)));
        }
        if self.delta_override == Some(0) {
            return Err(Error::SpecInvalid("rebuild period must be positive".into()));
        }
        Ok(())
    }
}

fn log2n(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

/// Rebuild period `ceil(n^(1/3) log2(n)^(2/3))` of the weighted variant.
pub fn weighted_delta(n: usize) -> usize {
    let n = n.max(1);
    ((n as f64).cbrt() * log2n(n).powf(2.0 / 3.0)).ceil().max(1.0) as usize
}

/// Rebuild period `ceil(sqrt(n / log2 n))` of the deterministic variant.
pub fn deterministic_delta(n: usize) -> usize {
    ((n.max(1) as f64).sqrt() / log2n(n).sqrt()).ceil().max(1.0) as usize
}

/// Hop bound `ceil((n / log2 n)^(1/4))` of the deterministic variant, at
/// least 2 so that long-range rounds make progress.
pub fn deterministic_hop(n: usize) -> usize {
    ((n.max(1) as f64 / log2n(n)).powf(0.25).ceil() as usize).max(2)
}

/// Hop bound `ceil(sqrt n)` above which the unweighted variant switches to
/// full BFS from sampled centers.
pub fn unweighted_hop(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

/// Levels `1..=floor(log2 ceil(sqrt n))` with their own schedules.
pub fn unweighted_levels(n: usize) -> Vec<u32> {
    let h = unweighted_hop(n);
    if h < 2 {
        return Vec::new();
    }
    (1..=h.ilog2()).collect()
}

/// Rebuild period of unweighted level `i`: half of
/// `ceil(2 sqrt(n) / (2^i sqrt(log2 n)))`, rounded up, at least 1.
pub fn unweighted_delta(n: usize, level: u32) -> usize {
    let twice = (2.0 * (n as f64).sqrt() / ((1u64 << level) as f64 * log2n(n).sqrt())).ceil() as usize;
    twice.div_ceil(2).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    /// A new background build started on the graph before this update.
    BuildStart,
    /// The background build became active before serving this update.
    Swap,
}

/// One entry of the rebuild audit log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScheduleEvent {
    /// 1-based update index.
    pub update: u64,
    /// Unweighted level, 0 for the single schedule of the other variants.
    pub level: u32,
    pub kind: ScheduleKind,
}

/// Counters of one update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateReport {
    pub work: Work,
    pub swapped: bool,
    pub max_congestion: u64,
    pub centers_total: usize,
}

struct Building {
    build: StagedBuild,
    /// Number of updates applied when the snapshot was taken.
    time: u64,
    slice: usize,
}

/// Active structure plus the copy being built for the next period.
struct Copies {
    level: u32,
    delta: usize,
    spec: BuildSpec,
    reweight: bool,
    active: DecrementalStructure,
    active_time: u64,
    building: Option<Building>,
}

impl Copies {
    fn new(g: &Graph, level: u32, delta: usize, spec: BuildSpec, reweight: bool) -> Result<(Self, Work)> {
        let (active, work) = StagedBuild::new(g, spec, reweight)?.finish()?;
        Ok((
            Copies {
                level,
                delta,
                spec,
                reweight,
                active,
                active_time: 0,
                building: None,
            },
            work,
        ))
    }

    /// Swap and build start for update `u`, before the event is applied.
    fn begin(&mut self, u: u64, before: &Graph, audit: &mut Vec<ScheduleEvent>) -> Result<(Work, bool)> {
        let mut work = Work::default();
        let mut swapped = false;
        if u > 1 && (u - 1).is_multiple_of(self.delta as u64) {
            if let Some(b) = self.building.take() {
                let (ds, w) = b.build.finish()?;
                work += w;
                self.active = ds;
                self.active_time = b.time;
                swapped = true;
                audit.push(ScheduleEvent {
                    update: u,
                    level: self.level,
                    kind: ScheduleKind::Swap,
                });
            }
        }
        if self.building.is_none() {
            self.spec.epoch += 1;
            let build = StagedBuild::new(before, self.spec, self.reweight)?;
            let slice = build.total_units().div_ceil(self.delta);
            self.building = Some(Building {
                build,
                time: u - 1,
                slice,
            });
            audit.push(ScheduleEvent {
                update: u,
                level: self.level,
                kind: ScheduleKind::BuildStart,
            });
        }
        Ok((work, swapped))
    }

    /// Advances the background build by one slice.
    fn advance(&mut self) -> Result<Work> {
        let mut work = Work::default();
        if let Some(b) = &mut self.building {
            for _ in 0..b.slice {
                if b.build.is_done() {
                    break;
                }
                work += b.build.step()?;
            }
        }
        Ok(work)
    }
}

struct Inserted {
    time: u64,
    decl: InsertedNode,
}

/// Fully dynamic all-pairs distances under node insertions and deletions.
///
/// Every update recomputes the view from the active batch-deletion structure
/// (all snapshot nodes deleted since its snapshot) and one Floyd-Warshall
/// iteration per node inserted since then, while the next structure is built
/// in slices on the side.
pub struct DynamicApsp {
    cfg: EngineConfig,
    graph: Graph,
    /// Node count of the initial graph; fixes every period and hop bound.
    n0: usize,
    updates: u64,
    copies: Vec<Copies>,
    /// Events since the oldest active snapshot.
    window: Vec<(u64, UpdateEvent)>,
    inserted: Vec<Inserted>,
    view: DistanceView,
    audit: Vec<ScheduleEvent>,
    report: UpdateReport,
    long_range_centers: usize,
}

impl DynamicApsp {
    /// Builds the initial structures. Weighted variants reweight with
    /// potentials; the unweighted variant requires unit weights.
    pub fn new(g: &Graph, cfg: EngineConfig) -> Result<Self> {
        cfg.validate()?;
        let n = g.node_count();
        let mut work = Work::default();
        let copies = match cfg.variant {
            Variant::RandWeighted => {
                let delta = cfg.delta_override.unwrap_or_else(|| weighted_delta(n));
                let spec = BuildSpec::randomized(cfg.c, cfg.seed);
                let (c, w) = Copies::new(g, 0, delta, spec, true)?;
                work += w;
                vec![c]
            }
            Variant::Deterministic => {
                let delta = cfg.delta_override.unwrap_or_else(|| deterministic_delta(n));
                let spec = BuildSpec {
                    shape: Shape::Deterministic {
                        hop: deterministic_hop(n),
                    },
                    ..BuildSpec::randomized(cfg.c, cfg.seed)
                };
                let (c, w) = Copies::new(g, 0, delta, spec, true)?;
                work += w;
                vec![c]
            }
            Variant::Unweighted => {
                if let Some((from, to, weight)) = g.edges().find(|e| e.2 != 1) {
                    return Err(Error::WeightedInput { from, to, weight });
                }
                let mut v = Vec::new();
                for level in unweighted_levels(n) {
                    let delta = cfg.delta_override.unwrap_or_else(|| unweighted_delta(n, level));
                    let spec = BuildSpec {
                        kernel: Kernel::Bfs,
                        shape: Shape::Level(level),
                        ..BuildSpec::randomized(cfg.c, cfg.seed)
                    };
                    let (c, w) = Copies::new(g, level, delta, spec, false)?;
                    work += w;
                    v.push(c);
                }
                v
            }
        };
        let mut engine = DynamicApsp {
            cfg,
            graph: g.clone(),
            n0: n,
            updates: 0,
            copies,
            window: Vec::new(),
            inserted: Vec::new(),
            view: DistanceView::unreachable(Vec::new()),
            audit: Vec::new(),
            report: UpdateReport::default(),
            long_range_centers: 0,
        };
        work += engine.recompute()?;
        engine.report = engine.report_for(work, false);
        Ok(engine)
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of updates applied so far.
    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn view(&self) -> &DistanceView {
        &self.view
    }

    /// Rebuild periods, one per schedule (one per level for the unweighted
    /// variant, in ascending level order).
    pub fn deltas(&self) -> Vec<(u32, usize)> {
        self.copies.iter().map(|c| (c.level, c.delta)).collect()
    }

    /// Structures currently answering deletions.
    pub fn active_structures(&self) -> impl Iterator<Item = &DecrementalStructure> {
        self.copies.iter().map(|c| &c.active)
    }

    pub fn audit_log(&self) -> &[ScheduleEvent] {
        &self.audit
    }

    /// Counters of the last update (or of construction).
    pub fn last_report(&self) -> UpdateReport {
        self.report
    }

    /// Events applied since the oldest active snapshot, with their indices.
    pub fn window(&self) -> &[(u64, UpdateEvent)] {
        &self.window
    }

    /// Applies one event and returns the new distances. A rejected event
    /// leaves the engine unchanged.
    pub fn update(&mut self, e: &UpdateEvent) -> Result<&DistanceView> {
        self.graph.validate_event(e)?;
        if let UpdateEvent::InsertNode {
            node,
            in_edges,
            out_edges,
        } = e
        {
            if self.cfg.variant == Variant::Unweighted {
                let mut bad = in_edges
                    .iter()
                    .map(|&(u, w)| (u, *node, w))
                    .chain(out_edges.iter().map(|&(v, w)| (*node, v, w)));
                if let Some((from, to, weight)) = bad.find(|x| x.2 != 1) {
                    return Err(Error::WeightedInput { from, to, weight });
                }
            }
            self.check_cycle(*node, in_edges, out_edges)?;
        }
        let u = self.updates + 1;
        let mut work = Work::default();
        let mut swapped = false;
        for c in &mut self.copies {
            let (w, s) = c.begin(u, &self.graph, &mut self.audit)?;
            work += w;
            swapped |= s;
        }
        self.graph.apply_in_place(e)?;
        self.updates = u;
        self.window.push((u, e.clone()));
        if let UpdateEvent::InsertNode {
            node,
            in_edges,
            out_edges,
        } = e
        {
            self.inserted.push(Inserted {
                time: u,
                decl: InsertedNode {
                    node: *node,
                    in_edges: in_edges.clone(),
                    out_edges: out_edges.clone(),
                },
            });
        }
        let oldest = self.oldest_snapshot();
        self.window.retain(|x| x.0 > oldest);
        self.inserted
            .retain(|x| x.time > oldest && self.graph.is_alive(x.decl.node));
        for c in &mut self.copies {
            work += c.advance()?;
        }
        work += self.recompute()?;
        self.report = self.report_for(work, swapped);
        Ok(&self.view)
    }

    pub fn query_dist(&self, s: NodeId, t: NodeId) -> Result<Weight> {
        for x in [s, t] {
            if !self.graph.is_alive(x) {
                return Err(Error::DeadEndpoint(x));
            }
        }
        Ok(self.view.dist(s, t))
    }

    /// Walks stored first hops from `s` to `t`.
    pub fn query_path(&self, s: NodeId, t: NodeId) -> Result<Vec<NodeId>> {
        self.view.path(s, t)
    }

    /// Rejects an insertion that closes a negative cycle through the new
    /// node: `w(u, v) + dist(z, u) + w(v, z) < 0` for declared edges.
    fn check_cycle(&self, node: NodeId, in_edges: &[(NodeId, Weight)], out_edges: &[(NodeId, Weight)]) -> Result<()> {
        for &(z, wz) in out_edges {
            for &(u, wu) in in_edges {
                let d = self.view.dist(z, u);
                if d != INFINITY && wz + d + wu < 0 {
                    return Err(Error::NegativeCycleIntroduced(node));
                }
            }
        }
        Ok(())
    }

    fn oldest_snapshot(&self) -> u64 {
        self.copies.iter().map(|c| c.active_time).min().unwrap_or(self.updates)
    }

    fn overlay_since(&self, time: u64) -> Vec<InsertedNode> {
        self.inserted
            .iter()
            .filter(|x| x.time > time && self.graph.is_alive(x.decl.node))
            .map(|x| x.decl.clone())
            .collect()
    }

    fn report_for(&self, work: Work, swapped: bool) -> UpdateReport {
        UpdateReport {
            work,
            swapped,
            max_congestion: self.copies.iter().map(|c| c.active.max_congestion()).max().unwrap_or(0),
            centers_total: self.copies.iter().map(|c| c.active.centers_total()).sum::<usize>()
                + self.long_range_centers,
        }
    }

    fn recompute(&mut self) -> Result<Work> {
        match self.cfg.variant {
            Variant::RandWeighted | Variant::Deterministic => self.recompute_single(),
            Variant::Unweighted => self.recompute_layers(),
        }
    }

    fn recompute_single(&mut self) -> Result<Work> {
        let c = &self.copies[0];
        let ds = &c.active;
        let deleted: Vec<NodeId> = ds.ids().iter().copied().filter(|&v| !self.graph.is_alive(v)).collect();
        assert!(
            deleted.len() <= 2 * c.delta,
            "{} deletions exceed the window capacity {}",
            deleted.len(),
            2 * c.delta
        );
        let (mut dv, mut work) = match self.cfg.variant {
            Variant::Deterministic => batch_delete_det(ds, &deleted)?,
            _ => batch_delete(ds, &deleted)?,
        };
        ds.unreweight(&mut dv);
        let (view, w) = fw_insert_overlay(&dv, &self.overlay_since(c.active_time))?;
        work += w;
        self.view = view;
        Ok(work)
    }

    /// Per-level repairs on the nodes present in every active snapshot,
    /// full BFS from fresh centers for long paths, then the overlay of
    /// every node inserted after the oldest snapshot.
    fn recompute_layers(&mut self) -> Result<Work> {
        let mut work = Work::default();
        let oldest = self.oldest_snapshot();
        let overlay = self.overlay_since(oldest);
        let mut in_overlay = vec![false; self.graph.capacity()];
        for x in &overlay {
            in_overlay[x.node] = true;
        }
        let base: Vec<NodeId> = self.graph.alive_nodes().filter(|&v| !in_overlay[v]).collect();
        let mut view = DistanceView::unreachable(base.clone());
        for c in &self.copies {
            let ds = &c.active;
            let removed: Vec<NodeId> = ds.ids().iter().copied().filter(|&v| !view.contains(v)).collect();
            let (dv, w) = batch_delete(ds, &removed)?;
            work += w;
            if dv.nodes() != base.as_slice() {
                return Err(Error::InternalInconsistency(format!(
                    "level {} misses base nodes",
                    c.level
                )));
            }
            for i in 0..base.len() {
                for j in 0..base.len() {
                    let (d, h, f) = dv.get_local(i, j);
                    if i != j && d != INFINITY {
                        view.improve_local(i, j, d, h, f);
                    }
                }
            }
        }

        let n = self.n0;
        let level = crate::decremental::ceil_log2(unweighted_hop(n));
        let cfg = SamplerConfig::new(self.cfg.c, self.cfg.seed, n)?;
        let centers = sample_centers(&cfg, 1usize << level, &base, (self.updates << 8) | 0xff);
        self.long_range_centers = centers.len();
        let mut excluded = in_overlay;
        for (x, e) in excluded.iter_mut().enumerate() {
            *e |= !self.graph.is_alive(x);
        }
        let depth = self.graph.capacity();
        for &c in &centers {
            let to = bfs_depth(&self.graph, c, depth, Direction::ToRoot, &excluded)?;
            let from = bfs_depth(&self.graph, c, depth, Direction::FromRoot, &excluded)?;
            work.relaxations += to.relaxations() + from.relaxations();
            let rec = VisitRecord::new(c, to, from);
            for (i, &s) in base.iter().enumerate() {
                for (j, &t) in base.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    work.relaxations += 1;
                    if let Some((d, h, f)) = rec.through(s, t) {
                        let f = view.local(f as NodeId).expect("first hop stays in the base set");
                        view.improve_local(i, j, d, h, f as u32);
                    }
                }
            }
        }

        let (view, w) = fw_insert_overlay(&view, &overlay)?;
        work += w;
        self.view = view;
        Ok(work)
    }
}
