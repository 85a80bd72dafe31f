//! Text formats: the graph file and the update stream.
//!
//! Graph file: first line `n m`, then `m` lines `u v w`. Lines starting with
//! `#` are comments. Update stream, one record per line:
//!
//! ```text
//! del <id>
//! add <id> | in u:w,u:w | out v:w
//! q <s> <t>
//! qp <s> <t>
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{check_headroom, Graph, NodeId, UpdateEvent, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamRecord {
    Update(UpdateEvent),
    Query(NodeId, NodeId),
    PathQuery(NodeId, NodeId),
}

fn malformed(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::MalformedInput {
        line,
        column,
        message: message.into(),
    }
}

/// Meaningful lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
        let t = l.trim_start();
        !t.is_empty() && !t.starts_with('#')
    })
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: (usize, &str), line: usize, what: &str) -> Result<T> {
    tok.1
        .parse()
        .map_err(|_| malformed(line, tok.0, format!("expected {what}, found `{}`", tok.1)))
}

pub fn load_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| malformed(1, 1, "missing `n m` header"))?;
    let toks = tokens(header);
    if toks.len() != 2 {
        return Err(malformed(hl, 1, "header must be `n m`"));
    }
    let n: usize = parse_num(toks[0], hl, "node count")?;
    let m: usize = parse_num(toks[1], hl, "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut max_abs = 0i64;
    let mut last_line = hl;
    for _ in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| malformed(last_line + 1, 1, format!("expected {m} edge lines")))?;
        last_line = ln;
        let toks = tokens(l);
        if toks.len() != 3 {
            return Err(malformed(ln, 1, "edge line must be `u v w`"));
        }
        let u: u64 = parse_num(toks[0], ln, "node id")?;
        let v: u64 = parse_num(toks[1], ln, "node id")?;
        let w: Weight = parse_num(toks[2], ln, "weight")?;
        for x in [u, v] {
            if x >= n as u64 {
                return Err(Error::DanglingEndpoint { line: ln, node: x });
            }
        }
        if u == v && w < 0 {
            return Err(malformed(ln, toks[2].0, "negative self-loop"));
        }
        max_abs = max_abs.max(w.checked_abs().unwrap_or(i64::MAX));
        edges.push((u as NodeId, v as NodeId, w));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(malformed(ln, 1, "trailing content after edge list"));
    }
    check_headroom(n, max_abs)?;
    Graph::from_edges(n, &edges)
}

/// Writes the alive edges of `g` in graph-file form. Dead ids are emitted
/// as isolated nodes.
pub fn serialize_graph(g: &Graph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.capacity(), g.edge_count());
    for (u, v, w) in g.edges() {
        let _ = writeln!(s, "{u} {v} {w}");
    }
    s
}

fn parse_edge_list(part: &str, keyword: &str, line: usize, col: usize) -> Result<Vec<(NodeId, Weight)>> {
    let body = part
        .trim()
        .strip_prefix(keyword)
        .ok_or_else(|| malformed(line, col, format!("expected `{keyword}` section")))?
        .trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|item| {
            let (a, b) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| malformed(line, col, format!("expected `id:w`, found `{item}`")))?;
            let id = a
                .trim()
                .parse()
                .map_err(|_| malformed(line, col, format!("bad node id `{a}`")))?;
            let w = b
                .trim()
                .parse()
                .map_err(|_| malformed(line, col, format!("bad weight `{b}`")))?;
            Ok((id, w))
        })
        .collect()
}

pub fn parse_stream(text: &str) -> Result<Vec<StreamRecord>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        let toks = tokens(l);
        let rec = match toks[0].1 {
            "del" => {
                if toks.len() != 2 {
                    return Err(malformed(ln, 1, "expected `del <id>`"));
                }
                StreamRecord::Update(UpdateEvent::DeleteNode {
                    node: parse_num(toks[1], ln, "node id")?,
                })
            }
            "q" | "qp" => {
                if toks.len() != 3 {
                    return Err(malformed(ln, 1, format!("expected `{} <s> <t>`", toks[0].1)));
                }
                let s = parse_num(toks[1], ln, "node id")?;
                let t = parse_num(toks[2], ln, "node id")?;
                if toks[0].1 == "q" {
                    StreamRecord::Query(s, t)
                } else {
                    StreamRecord::PathQuery(s, t)
                }
            }
            "add" => {
                let parts: Vec<&str> = l.split('|').collect();
                if parts.len() != 3 {
                    return Err(malformed(ln, 1, "expected `add <id> | in ... | out ...`"));
                }
                let head = tokens(parts[0]);
                if head.len() != 2 {
                    return Err(malformed(ln, 1, "expected `add <id>`"));
                }
                let node = parse_num(head[1], ln, "node id")?;
                let in_col = parts[0].len() + 2;
                let out_col = in_col + parts[1].len() + 1;
                StreamRecord::Update(UpdateEvent::InsertNode {
                    node,
                    in_edges: parse_edge_list(parts[1], "in", ln, in_col)?,
                    out_edges: parse_edge_list(parts[2], "out", ln, out_col)?,
                })
            }
            other => {
                return Err(malformed(ln, toks[0].0, format!("unknown record `{other}`")));
            }
        };
        out.push(rec);
    }
    Ok(out)
}

pub fn format_record(r: &StreamRecord) -> String {
    let list = |edges: &[(NodeId, Weight)]| {
        let items: Vec<String> = edges.iter().map(|(v, w)| format!("{v}:{w}")).collect();
        if items.is_empty() {
            String::new()
        } else {
            format!(" {}", items.join(","))
        }
    };
    match r {
        StreamRecord::Update(UpdateEvent::DeleteNode { node }) => format!("del {node}"),
        StreamRecord::Update(UpdateEvent::InsertNode {
            node,
            in_edges,
            out_edges,
        }) => format!("add {node} | in{} | out{}", list(in_edges), list(out_edges)),
        StreamRecord::Query(s, t) => format!("q {s} {t}"),
        StreamRecord::PathQuery(s, t) => format!("qp {s} {t}"),
    }
}

pub fn write_stream<'a>(records: impl IntoIterator<Item = &'a StreamRecord>) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&format_record(r));
        s.push('\n');
    }
    s
}
