use rand::Rng;

use super::adversary::Attacker;
use super::workload::WorkloadSpec;
use crate::dynamic::{DynamicApsp, EngineConfig};
use crate::error::Result;
use crate::format::StreamRecord;
use crate::graph::{Graph, NodeId, UpdateEvent, Weight, INFINITY};
use crate::oracle::apsp_oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchKind {
    /// Reported distance differs from the oracle.
    Distance,
    /// The returned path does not exist or its weight differs from the
    /// reported distance; `got` is the path weight.
    Path,
}

/// First failing check of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    /// Updates applied before the failing check.
    pub update: u64,
    pub s: NodeId,
    pub t: NodeId,
    pub expected: Weight,
    pub got: Weight,
    pub kind: MismatchKind,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |w: Weight| {
            if w == INFINITY {
                "inf".to_string()
            } else {
                w.to_string()
            }
        };
        let what = match self.kind {
            MismatchKind::Distance => "distance",
            MismatchKind::Path => "path weight",
        };
        write!(
            f,
            "{what} mismatch after update {}: ({}, {}) expected {} got {}",
            self.update,
            self.s,
            self.t,
            show(self.expected),
            show(self.got)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub updates: u64,
    pub pairs_checked: u64,
    pub paths_checked: u64,
    pub mismatch: Option<Mismatch>,
    /// Every update and adversary query, in order; replayable with `run`.
    pub trace: Vec<StreamRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Weight of `path` in `g`, `None` if some step is not an edge.
pub fn path_weight(g: &Graph, path: &[NodeId]) -> Option<Weight> {
    path.windows(2).map(|w| g.edge_weight(w[0], w[1])).sum()
}

/// Compares every alive pair with the oracle and checks that each finite
/// answer is witnessed by the returned path.
pub fn check_engine(engine: &DynamicApsp, report: &mut VerifyReport) -> Result<Option<Mismatch>> {
    let g = engine.graph();
    let oracle = apsp_oracle(g);
    let alive: Vec<NodeId> = g.alive_nodes().collect();
    for &s in &alive {
        for &t in &alive {
            let got = engine.query_dist(s, t)?;
            let expected = oracle.dist(s, t);
            report.pairs_checked += 1;
            let fail = |expected, got, kind| Mismatch {
                update: engine.updates(),
                s,
                t,
                expected,
                got,
                kind,
            };
            if got != expected {
                return Ok(Some(fail(expected, got, MismatchKind::Distance)));
            }
            if got == INFINITY {
                continue;
            }
            report.paths_checked += 1;
            let walked = engine
                .query_path(s, t)
                .ok()
                .filter(|p| p.first() == Some(&s) && p.last() == Some(&t))
                .and_then(|p| path_weight(g, &p));
            if walked != Some(got) {
                return Ok(Some(fail(got, walked.unwrap_or(INFINITY), MismatchKind::Path)));
            }
        }
    }
    Ok(None)
}

/// Replays `records` and checks the engine against the oracle after
/// construction and after every update. Query records are skipped since
/// every pair is checked anyway. Stops at the first mismatch.
pub fn verify_stream(g: &Graph, records: &[StreamRecord], cfg: EngineConfig) -> Result<VerifyReport> {
    let mut engine = DynamicApsp::new(g, cfg)?;
    let mut report = VerifyReport::default();
    report.mismatch = check_engine(&engine, &mut report)?;
    for r in records {
        if report.mismatch.is_some() {
            break;
        }
        report.trace.push(r.clone());
        if let StreamRecord::Update(e) = r {
            engine.update(e)?;
            report.updates += 1;
            report.mismatch = check_engine(&engine, &mut report)?;
        }
    }
    Ok(report)
}

/// Adaptive run: insertions come from `spec`, deletions from the attacker
/// in `spec.adversary`, falling back to a random alive node when the
/// attacker has no target.
pub fn verify_adaptive(g: &Graph, spec: &WorkloadSpec, cfg: EngineConfig) -> Result<VerifyReport> {
    spec.validate()?;
    let mut engine = DynamicApsp::new(g, cfg)?;
    let mut rng = spec.event_rng();
    let mut attacker = Attacker::new(spec.adversary);
    let mut report = VerifyReport::default();
    report.mismatch = check_engine(&engine, &mut report)?;
    let mut trace = Vec::new();
    while report.mismatch.is_none() && report.updates < spec.updates as u64 {
        attacker.observe(&engine, &mut rng, &mut trace);
        let e = if spec.draw_is_insert(engine.graph(), &mut rng) {
            spec.safe_insertion(engine.graph(), &mut rng)?
        } else {
            let node = attacker.target().unwrap_or_else(|| {
                let alive: Vec<NodeId> = engine.graph().alive_nodes().collect();
                alive[rng.gen_range(0..alive.len())]
            });
            UpdateEvent::DeleteNode { node }
        };
        engine.update(&e)?;
        trace.push(StreamRecord::Update(e));
        report.updates += 1;
        report.mismatch = check_engine(&engine, &mut report)?;
    }
    report.trace = trace;
    Ok(report)
}
