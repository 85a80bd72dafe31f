//! Center sampling and greedy hitting sets.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    /// Confidence parameter, at least 1.
    pub c: f64,
    pub seed: u64,
    /// Node count used for the logarithm in the oversampling factor.
    pub n: usize,
}

impl SamplerConfig {
    pub fn new(c: f64, seed: u64, n: usize) -> Result<Self> {
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::SpecInvalid(format!("confidence must be >= 1, got {c}")));
        }
        Ok(SamplerConfig { c, seed, n })
    }

    /// Oversampling factor `1 + 3 (c + 1) ln n`.
    pub fn oversampling(&self) -> f64 {
        1.0 + 3.0 * (self.c + 1.0) * (self.n.max(1) as f64).ln()
    }

    /// Inclusion threshold for a uniform `u64` draw at hop bound `h`, in
    /// 64-bit fixed point. `None` means every node is included.
    pub fn threshold(&self, h: usize) -> Option<u64> {
        // x is quantised to 2^-32 before the division so that the comparison
        // itself is pure integer arithmetic
        let x_fp = (self.oversampling() * 4_294_967_296.0).floor() as u128;
        let h = h.max(1) as u128;
        if x_fp >= h << 32 {
            None
        } else {
            Some(((x_fp << 32) / h) as u64)
        }
    }
}

/// Deterministic generator for one sub-stream of the engine seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Includes each node of `universe` independently with probability
/// `min(x / h, 1)`. One draw per node in ascending id order.
pub fn sample_centers(cfg: &SamplerConfig, h: usize, universe: &[NodeId], stream: u64) -> Vec<NodeId> {
    let mut sorted = universe.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let Some(th) = cfg.threshold(h) else {
        return sorted;
    };
    let mut rng = stream_rng(cfg.seed, stream);
    sorted.retain(|_| rng.next_u64() < th);
    sorted
}

/// Greedy cover: repeatedly takes the node contained in the most families
/// not yet hit, ties to the smaller id. Returns the chosen nodes ascending.
pub fn greedy_hitting_set(families: &[Vec<NodeId>]) -> Result<Vec<NodeId>> {
    let universe = families
        .iter()
        .flat_map(|f| f.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let mut sets = Vec::with_capacity(families.len());
    let mut member_of: Vec<Vec<u32>> = vec![Vec::new(); universe];
    for (k, f) in families.iter().enumerate() {
        if f.is_empty() {
            return Err(Error::EmptyFamily(k));
        }
        let mut f = f.clone();
        f.sort_unstable();
        f.dedup();
        for &v in &f {
            member_of[v].push(k as u32);
        }
        sets.push(f);
    }
    let mut count: Vec<usize> = member_of.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<(usize, Reverse<NodeId>)> = count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(v, &c)| (c, Reverse(v)))
        .collect();
    let mut hit = vec![false; families.len()];
    let mut chosen = Vec::new();
    while let Some((c, Reverse(v))) = heap.pop() {
        if c != count[v] {
            if count[v] > 0 {
                heap.push((count[v], Reverse(v)));
            }
            continue;
        }
        chosen.push(v);
        for &k in &member_of[v] {
            if std::mem::replace(&mut hit[k as usize], true) {
                continue;
            }
            for &u in &sets[k as usize] {
                count[u] -= 1;
            }
        }
        count[v] = 0;
    }
    chosen.sort_unstable();
    Ok(chosen)
}
