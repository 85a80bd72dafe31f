use std::io::Write;
use std::time::Instant;

use crate::dynamic::{DynamicApsp, EngineConfig};
use crate::error::Result;
use crate::format::StreamRecord;
use crate::graph::Graph;

pub const CSV_HEADER: &str =
    "update_idx,wall_ns,relaxations,sketch_edges,affected_nodes,max_congestion,centers_total,swapped";

/// Counters of one update. All counts are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRecord {
    /// 1-based update index.
    pub update_idx: u64,
    pub wall_ns: u128,
    pub relaxations: u64,
    pub sketch_edges: u64,
    pub affected_nodes: u64,
    /// Largest counter over the active layers.
    pub max_congestion: u64,
    /// Centers summed over the active layers.
    pub centers_total: usize,
    pub swapped: bool,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.update_idx,
            self.wall_ns,
            self.relaxations,
            self.sketch_edges,
            self.affected_nodes,
            self.max_congestion,
            self.centers_total,
            u8::from(self.swapped)
        )
    }
}

/// Replays the updates of `records` and measures each one.
pub fn bench_stream(g: &Graph, records: &[StreamRecord], cfg: EngineConfig) -> Result<Vec<BenchRecord>> {
    let mut engine = DynamicApsp::new(g, cfg)?;
    let mut out = Vec::new();
    for r in records {
        let StreamRecord::Update(e) = r else { continue };
        let start = Instant::now();
        engine.update(e)?;
        let wall_ns = start.elapsed().as_nanos();
        let rep = engine.last_report();
        out.push(BenchRecord {
            update_idx: engine.updates(),
            wall_ns,
            relaxations: rep.work.relaxations,
            sketch_edges: rep.work.sketch_edges,
            affected_nodes: rep.work.affected_nodes,
            max_congestion: rep.max_congestion,
            centers_total: rep.centers_total,
            swapped: rep.swapped,
        });
    }
    Ok(out)
}

/// Header plus one row per record, LF line endings.
pub fn write_csv(records: &[BenchRecord], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
