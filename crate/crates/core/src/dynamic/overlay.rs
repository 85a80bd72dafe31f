use crate::error::{Error, Result};
use crate::graph::{NodeId, Weight, INFINITY, NONE};
use crate::stats::Work;
use crate::view::DistanceView;

/// A node added after the snapshot, with its edges as declared at insertion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InsertedNode {
    pub node: NodeId,
    /// `(u, w)` for each edge `u -> node`.
    pub in_edges: Vec<(NodeId, Weight)>,
    /// `(z, w)` for each edge `node -> z`.
    pub out_edges: Vec<(NodeId, Weight)>,
}

/// One vertex-insertion step of Floyd-Warshall per node in `inserted`, in
/// order. Edges whose other endpoint is neither in `base` nor earlier in
/// `inserted` are skipped. `base` must be exact on its node set.
pub fn fw_insert_overlay(base: &DistanceView, inserted: &[InsertedNode]) -> Result<(DistanceView, Work)> {
    let nb = base.len();
    let total = nb + inserted.len();
    let mut nodes = base.nodes().to_vec();
    nodes.extend(inserted.iter().map(|x| x.node));
    let mut out = DistanceView::unreachable(nodes);
    for i in 0..nb {
        for j in 0..nb {
            let (d, h, f) = base.get_local(i, j);
            out.set_local(i, j, d, h, f);
        }
    }
    let mut work = Work::default();
    for (k, ins) in inserted.iter().enumerate() {
        let v = nb + k;
        let present = |x: NodeId| out.local(x).filter(|&i| i < v);
        let ins_edges: Vec<(usize, Weight)> = ins
            .in_edges
            .iter()
            .filter_map(|&(u, w)| present(u).map(|i| (i, w)))
            .collect();
        let out_edges: Vec<(usize, Weight)> = ins
            .out_edges
            .iter()
            .filter_map(|&(z, w)| present(z).map(|i| (i, w)))
            .collect();

        // column: x -> u -> v
        for x in 0..v {
            for &(u, w) in &ins_edges {
                work.relaxations += 1;
                let (d, h, f) = out.get_local(x, u);
                if d == INFINITY {
                    continue;
                }
                let first = if x == u { v as u32 } else { f };
                out.improve_local(x, v, d + w, h + 1, first);
            }
        }
        // row: v -> z -> y
        for y in 0..v {
            for &(z, w) in &out_edges {
                work.relaxations += 1;
                let (d, h, _) = out.get_local(z, y);
                if d != INFINITY {
                    out.improve_local(v, y, w + d, h + 1, z as u32);
                }
            }
        }
        for &(u, w) in &ins_edges {
            let d = out.get_local(v, u).0;
            if d != INFINITY && d + w < 0 {
                return Err(Error::NegativeCycleIntroduced(ins.node));
            }
        }
        // pairs through v
        for s in 0..v {
            let (ds, hs, fs) = out.get_local(s, v);
            if ds == INFINITY {
                continue;
            }
            for t in 0..v {
                if s == t {
                    continue;
                }
                work.relaxations += 1;
                let (dt, ht, _) = out.get_local(v, t);
                if dt != INFINITY {
                    out.improve_local(s, t, ds + dt, hs + ht, fs);
                }
            }
        }
    }
    debug_assert!((0..total).all(|i| out.get_local(i, i) == (0, 0, NONE)));
    Ok((out, work))
}
