use crate::error::Result;
use crate::graph::{NodeId, INFINITY, NONE};
use crate::sampling::greedy_hitting_set;
use crate::stats::Work;
use crate::view::DistanceView;

/// Local-index node set of the stored `s -> t` walk, `None` if the
/// first-hop chain does not reach `t` within `n` steps.
fn stored_walk(view: &DistanceView, s: usize, t: usize) -> Option<Vec<NodeId>> {
    let mut walk = vec![s];
    let mut i = s;
    while i != t {
        let f = view.get_local(i, t).2;
        if f == NONE || walk.len() > view.len() {
            return None;
        }
        i = f as usize;
        walk.push(i);
    }
    Some(walk)
}

/// Turns a view that is exact (distance and minimum hop count) for every
/// pair with a shortest path of at most `h` hops into an exact view for all
/// pairs. Pairs stored with `ceil(h/2)..=h` hops are covered by a greedy
/// hitting set `B`; rounds of relaxation through `B` then run until stable.
///
/// Round `r` makes every pair with at most `floor(h/2) 2^r + ceil(h/2)`
/// hops exact. With `h < 2` that bound does not grow, so `B` is every node
/// and one round is a full Floyd-Warshall pass.
pub fn long_range_complete(view: &mut DistanceView, h: usize) -> Result<Work> {
    let n = view.len();
    let mut work = Work::default();
    if h + 1 >= n {
        return Ok(work);
    }
    let hitters: Vec<NodeId> = if h < 2 {
        (0..n).collect()
    } else {
        let lo = h.div_ceil(2) as u32;
        let mut families = Vec::new();
        for s in 0..n {
            for t in 0..n {
                let (d, hops, _) = view.get_local(s, t);
                if s != t && d != INFINITY && (lo..=h as u32).contains(&hops) {
                    work.relaxations += u64::from(hops);
                    if let Some(w) = stored_walk(view, s, t) {
                        families.push(w);
                    }
                }
            }
        }
        greedy_hitting_set(&families)?
    };
    loop {
        let mut changed = false;
        for &b in &hitters {
            for s in 0..n {
                let (ds, hs, fs) = view.get_local(s, b);
                if ds == INFINITY || s == b {
                    continue;
                }
                for t in 0..n {
                    if t == s || t == b {
                        continue;
                    }
                    work.relaxations += 1;
                    let (dt, ht, _) = view.get_local(b, t);
                    if dt != INFINITY {
                        changed |= view.improve_local(s, t, ds + dt, hs + ht, fs);
                    }
                }
            }
        }
        if !changed {
            return Ok(work);
        }
    }
}
