use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::workload::Adversary;
use crate::dynamic::DynamicApsp;
use crate::format::StreamRecord;
use crate::graph::NodeId;

/// Path queries issued per observation by [`Adversary::PathAttacker`]
/// before giving up on finding a path with an interior node.
const PATH_TRIES: usize = 64;
/// Path queries per alive node issued by [`Adversary::CenterHunter`].
const HUNTER_QUERIES_PER_NODE: usize = 4;

/// Adaptive deletion strategy. It observes the engine after every update
/// through path queries and proposes the next node to delete.
#[derive(Debug, Clone)]
pub struct Attacker {
    kind: Adversary,
    target: Option<NodeId>,
}

impl Attacker {
    pub fn new(kind: Adversary) -> Self {
        Attacker { kind, target: None }
    }

    /// Issues this strategy's queries against `engine`, appending them to
    /// `trace`, and fixes the next deletion target.
    pub fn observe(&mut self, engine: &DynamicApsp, rng: &mut ChaCha8Rng, trace: &mut Vec<StreamRecord>) {
        self.target = None;
        let alive: Vec<NodeId> = engine.graph().alive_nodes().collect();
        if alive.len() < 3 {
            return;
        }
        let pick = |rng: &mut ChaCha8Rng| {
            (
                alive[rng.gen_range(0..alive.len())],
                alive[rng.gen_range(0..alive.len())],
            )
        };
        match self.kind {
            Adversary::Oblivious => {}
            Adversary::PathAttacker => {
                for _ in 0..PATH_TRIES {
                    let (s, t) = pick(rng);
                    trace.push(StreamRecord::PathQuery(s, t));
                    if let Ok(p) = engine.query_path(s, t) {
                        if p.len() > 2 {
                            self.target = Some(p[rng.gen_range(1..p.len() - 1)]);
                            return;
                        }
                    }
                }
            }
            Adversary::CenterHunter => {
                let mut tally = vec![0u64; engine.graph().capacity()];
                for _ in 0..HUNTER_QUERIES_PER_NODE * alive.len() {
                    let (s, t) = pick(rng);
                    trace.push(StreamRecord::PathQuery(s, t));
                    if let Ok(p) = engine.query_path(s, t) {
                        for &x in p.iter().skip(1).take(p.len().saturating_sub(2)) {
                            tally[x] += 1;
                        }
                    }
                }
                self.target = tally
                    .iter()
                    .enumerate()
                    .filter(|e| *e.1 > 0)
                    .max_by_key(|&(x, &c)| (c, std::cmp::Reverse(x)))
                    .map(|e| e.0);
            }
        }
    }

    /// The node chosen by the last observation, if any.
    pub fn target(&self) -> Option<NodeId> {
        self.target
    }
}
