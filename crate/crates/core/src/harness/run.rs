use std::fmt::Write as _;

use crate::dynamic::{DynamicApsp, EngineConfig};
use crate::error::{Error, Result};
use crate::format::StreamRecord;
use crate::graph::{Graph, INFINITY};

/// Applies updates and answers queries in order: `q s t` prints
/// `s t <dist>` (`inf` when unreachable), `qp s t` prints the path nodes or
/// `unreachable`.
pub fn run_stream(g: &Graph, records: &[StreamRecord], cfg: EngineConfig) -> Result<String> {
    let mut engine = DynamicApsp::new(g, cfg)?;
    let mut out = String::new();
    for r in records {
        match *r {
            StreamRecord::Update(ref e) => {
                engine.update(e)?;
            }
            StreamRecord::Query(s, t) => {
                let d = engine.query_dist(s, t)?;
                if d == INFINITY {
                    let _ = writeln!(out, "{s} {t} inf");
                } else {
                    let _ = writeln!(out, "{s} {t} {d}");
                }
            }
            StreamRecord::PathQuery(s, t) => match engine.query_path(s, t) {
                Ok(p) => {
                    let nodes: Vec<String> = p.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "{}", nodes.join(" "));
                }
                Err(Error::PathUnavailable(..)) => out.push_str("unreachable\n"),
                Err(e) => return Err(e),
            },
        }
    }
    Ok(out)
}
