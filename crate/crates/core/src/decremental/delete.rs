use super::{DecrementalStructure, Layer, Shape, VisitRecord};
use crate::dynamic::long_range_complete;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight, INFINITY};
use crate::sssp::{dijkstra_graph, dijkstra_sssp, Direction, HopTree};
use crate::stats::Work;
use crate::view::DistanceView;

/// Per-visit state of one deletion call: visits whose node was deleted and,
/// for visits with a repaired sketch, the affected nodes.
#[derive(Debug, Clone, Default)]
pub struct DeletionMarks {
    pub dead: Vec<bool>,
    pub affected: Vec<Option<Vec<bool>>>,
}

impl DeletionMarks {
    fn skips(&self, rank: usize, s: NodeId, t: NodeId) -> bool {
        self.dead[rank] || self.affected[rank].as_ref().is_some_and(|a| a[s] || a[t])
    }
}

/// A sketch graph and the Dijkstra trees computed in it.
#[derive(Debug, Clone)]
pub struct SketchReport {
    pub affected: Vec<bool>,
    pub edges: Vec<(NodeId, NodeId, Weight)>,
    /// Distances into the visited node.
    pub to_root: HopTree,
    /// Distances out of the visited node.
    pub from_root: HopTree,
}

/// Nodes whose final stored state has a deleted node on its path.
fn destroyed(tree: &HopTree, in_d: &[bool], out: &mut [bool]) {
    let es = tree.entries();
    let mut bad = vec![false; es.len()];
    for (i, e) in es.iter().enumerate().skip(1) {
        bad[i] = in_d[e.node as usize] || bad[e.parent as usize];
    }
    for (x, flag) in out.iter_mut().enumerate() {
        if let Some(e) = tree.final_entry(x) {
            *flag |= bad[e];
        }
    }
}

fn affected_nodes(rec: &VisitRecord, in_d: &[bool]) -> Vec<bool> {
    let mut a = vec![false; in_d.len()];
    destroyed(&rec.to_tree, in_d, &mut a);
    destroyed(&rec.from_tree, in_d, &mut a);
    for (x, f) in a.iter_mut().enumerate() {
        *f &= !in_d[x];
    }
    a
}

/// Affected nodes keep all their edges into the graph without `excluded`;
/// every other node keeps its two stored tree links.
fn sketch_edges(g: &Graph, rec: &VisitRecord, affected: &[bool], excluded: &[bool]) -> Vec<(NodeId, NodeId, Weight)> {
    let mut edges = Vec::new();
    for y in 0..g.capacity() {
        if excluded[y] {
            continue;
        }
        if affected[y] {
            edges.extend(
                g.out_edges(y)
                    .iter()
                    .filter(|e| !excluded[e.0])
                    .map(|&(z, w)| (y, z, w)),
            );
            edges.extend(g.in_edges(y).iter().filter(|e| !excluded[e.0]).map(|&(z, w)| (z, y, w)));
            continue;
        }
        for (tree, outward) in [(&rec.to_tree, true), (&rec.from_tree, false)] {
            let Some(e) = tree.final_entry(y) else { continue };
            let entry = tree.entries()[e];
            if entry.parent == crate::graph::NONE {
                continue;
            }
            let p = tree.entries()[entry.parent as usize];
            let w = entry.dist - p.dist;
            let z = p.node as NodeId;
            edges.push(if outward { (y, z, w) } else { (z, y, w) });
        }
    }
    edges
}

fn build_sketch(g: &Graph, rec: &VisitRecord, affected: Vec<bool>, excluded: &[bool]) -> Result<SketchReport> {
    let edges = sketch_edges(g, rec, &affected, excluded);
    let n = g.capacity();
    let v = rec.node();
    Ok(SketchReport {
        to_root: dijkstra_sssp(n, &edges, v, Direction::ToRoot)?,
        from_root: dijkstra_sssp(n, &edges, v, Direction::FromRoot)?,
        affected,
        edges,
    })
}

impl DecrementalStructure {
    /// Sketch graph of the visit with rank `rank` in layer `layer` after
    /// deleting the local nodes `deleted`; `None` when the visited node
    /// itself is deleted.
    pub fn sketch(&self, layer: usize, rank: usize, deleted: &[NodeId]) -> Result<Option<SketchReport>> {
        let n = self.node_count();
        let mut in_d = vec![false; n];
        for &x in deleted {
            *in_d.get_mut(x).ok_or(Error::DeletingUnknownNode(x))? = true;
        }
        let l = &self.layers[layer];
        let rec = &l.visits[rank];
        if in_d[rec.node()] {
            return Ok(None);
        }
        let mut excluded = l.visited_before(rank);
        for (e, &d) in excluded.iter_mut().zip(&in_d) {
            *e |= d;
        }
        build_sketch(&self.snapshot, rec, affected_nodes(rec, &in_d), &excluded).map(Some)
    }
}

/// Smallest through-value for `(s, t)` after a deletion: the recomputed
/// minimum in `changed` against the first candidate whose stored paths
/// survived.
pub fn min_delta_query(
    layer: &Layer,
    s: NodeId,
    t: NodeId,
    marks: &DeletionMarks,
    changed: &DistanceView,
    work: &mut Work,
) -> (Weight, u32, u32) {
    let mut best = changed.get_local(s, t);
    for &k in layer.candidates(s, t) {
        work.relaxations += 1;
        let k = k as usize;
        if marks.skips(k, s, t) {
            continue;
        }
        let c = layer.visits[k].through(s, t).expect("listed candidate is finite");
        if (c.0, c.1) < (best.0, best.1) {
            best = c;
        }
        break;
    }
    best
}

/// Sketch repair of every visit of one layer: marks dead and affected
/// visits and collects, for pairs with an affected endpoint, the minimum
/// over the recomputed through-values.
fn repair_marks(
    ds: &DecrementalStructure,
    li: usize,
    in_d: &[bool],
    work: &mut Work,
) -> Result<(DeletionMarks, DistanceView)> {
    let layer = &ds.layers[li];
    let n = ds.node_count();
    let r = layer.visits.len();
    let mut marks = DeletionMarks {
        dead: vec![false; r],
        affected: vec![None; r],
    };
    let mut changed = DistanceView::unreachable((0..n).collect());
    let mut excluded = in_d.to_vec();
    for (k, rec) in layer.visits.iter().enumerate() {
        let v = rec.node();
        if in_d[v] {
            marks.dead[k] = true;
            continue;
        }
        let affected = affected_nodes(rec, in_d);
        let members: Vec<NodeId> = (0..n).filter(|&x| affected[x]).collect();
        if !members.is_empty() {
            let sk = build_sketch(&ds.snapshot, rec, affected, &excluded)?;
            work.affected_nodes += members.len() as u64;
            work.sketch_edges += sk.edges.len() as u64;
            work.relaxations += sk.to_root.relaxations() + sk.from_root.relaxations();
            let fresh = VisitRecord::new(v, sk.to_root, sk.from_root);
            for &s in &members {
                for t in (0..n).filter(|&t| t != s && !in_d[t]) {
                    work.relaxations += 1;
                    if let Some((d, h, f)) = fresh.through(s, t) {
                        changed.improve_local(s, t, d, h, f);
                    }
                }
            }
            for &t in &members {
                for s in (0..n).filter(|&s| s != t && !in_d[s]) {
                    work.relaxations += 1;
                    if let Some((d, h, f)) = fresh.through(s, t) {
                        changed.improve_local(s, t, d, h, f);
                    }
                }
            }
            marks.affected[k] = Some(sk.affected);
        }
        excluded[v] = true;
    }
    Ok((marks, changed))
}

/// Repairs one layer and folds its per-pair minima into `out`.
fn repair_layer(
    ds: &DecrementalStructure,
    li: usize,
    in_d: &[bool],
    out: &mut DistanceView,
    work: &mut Work,
) -> Result<()> {
    let layer = &ds.layers[li];
    let n = ds.node_count();
    let (marks, changed) = repair_marks(ds, li, in_d, work)?;
    for s in (0..n).filter(|&s| !in_d[s]) {
        for t in (0..n).filter(|&t| t != s && !in_d[t]) {
            let (d, h, f) = min_delta_query(layer, s, t, &marks, &changed, work);
            if d != INFINITY {
                out.improve_local(s, t, d, h, f);
            }
        }
    }
    Ok(())
}

/// Full Dijkstra to and from every surviving center, combined through it.
fn through_centers(
    ds: &DecrementalStructure,
    centers: &[NodeId],
    in_d: &[bool],
    out: &mut DistanceView,
    work: &mut Work,
) -> Result<()> {
    let n = ds.node_count();
    for &c in centers {
        if in_d[c] {
            continue;
        }
        let to = dijkstra_graph(&ds.snapshot, c, Direction::ToRoot, in_d)?;
        let from = dijkstra_graph(&ds.snapshot, c, Direction::FromRoot, in_d)?;
        work.relaxations += to.relaxations() + from.relaxations();
        let rec = VisitRecord::new(c, to, from);
        let targets: Vec<NodeId> = (0..n).filter(|&t| rec.from_dist[t] != INFINITY).collect();
        for s in (0..n).filter(|&s| rec.to_dist[s] != INFINITY) {
            for &t in &targets {
                if s == t {
                    continue;
                }
                work.relaxations += 1;
                let (d, h, f) = rec.through(s, t).expect("both halves finite");
                out.improve_local(s, t, d, h, f);
            }
        }
    }
    Ok(())
}

/// Largest `i` with `4^i |D| <= n`, i.e. `floor(log2 sqrt(n / |D|))`.
fn low_levels(n: usize, d: usize) -> u32 {
    let mut i = 0;
    while (d << (2 * (i + 1))) <= n {
        i += 1;
    }
    i
}

/// Smallest `j` with `4^j |D| >= n`, i.e. `ceil(log2 sqrt(n / |D|))`.
fn long_level(n: usize, d: usize) -> u32 {
    let mut j = 0;
    while (d << (2 * j)) < n {
        j += 1;
    }
    j
}

/// Distances of the snapshot without `deleted` (original node ids), in the
/// reweighted metric. The structure is not modified.
pub fn batch_delete(ds: &DecrementalStructure, deleted: &[NodeId]) -> Result<(DistanceView, Work)> {
    let n = ds.node_count();
    let mut in_d = vec![false; n];
    for &x in deleted {
        let i = ds.local_of(x).ok_or(Error::DeletingUnknownNode(x))?;
        in_d[i] = true;
    }
    let count = in_d.iter().filter(|&&b| b).count();
    let mut work = Work::default();
    let out = if count == 0 {
        ds.base.clone()
    } else {
        let mut out = DistanceView::unreachable((0..n).collect());
        match ds.spec.shape {
            Shape::Hierarchy => {
                let top = low_levels(n, count).min(ds.layers.len() as u32);
                for i in 1..=top {
                    repair_layer(ds, i as usize - 1, &in_d, &mut out, &mut work)?;
                }
                let j = long_level(n, count);
                let centers: Vec<NodeId> = match j.checked_sub(1).and_then(|k| ds.layers.get(k as usize)) {
                    Some(layer) => layer.centers().collect(),
                    None => (0..n).collect(),
                };
                through_centers(ds, &centers, &in_d, &mut out, &mut work)?;
            }
            Shape::Deterministic { .. } | Shape::Level(_) => {
                repair_layer(ds, 0, &in_d, &mut out, &mut work)?;
            }
        }
        out
    };
    let keep: Vec<bool> = in_d.iter().map(|&d| !d).collect();
    Ok((out.restrict(&keep, &ds.ids), work))
}

/// Deterministic deletion: sketch repair of the single level followed by
/// long-range completion through a greedy hitting set.
pub fn batch_delete_det(ds: &DecrementalStructure, deleted: &[NodeId]) -> Result<(DistanceView, Work)> {
    let (mut view, mut work) = batch_delete(ds, deleted)?;
    let hop = ds.layers.first().map_or(1, Layer::hop_bound);
    work += long_range_complete(&mut view, hop)?;
    Ok((view, work))
}
