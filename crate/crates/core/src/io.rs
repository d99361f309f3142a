//! Text formats: a plain edge list, DIMACS `p edge`, and write-only DOT.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};
use crate::tree::SpanningTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    /// `n m` header, then `u v` per edge with 0-based ids; `#` starts a comment.
    #[default]
    EdgeList,
    /// `c` comments, `p edge n m` header, `e u v` with 1-based ids.
    Dimacs,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" => Ok(Format::EdgeList),
            "dimacs" => Ok(Format::Dimacs),
            other => Err(format!("unknown format `{other}` (expected edgelist or dimacs)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; 0 when the problem is at end of input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("missing header")]
    MissingHeader,
    #[error("vertex {vertex} out of range (n = {n})")]
    OutOfRange { vertex: i64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(i64),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(i64, i64),
    #[error("header declares {declared} edges but body has {found}")]
    CountMismatch { declared: usize, found: usize },
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_num<T: FromStr>(tok: &str, line: usize) -> Result<T, ParseError> {
    tok.parse().map_err(|_| err(line, ParseErrorKind::Malformed(format!("expected an integer, got `{tok}`"))))
}

/// Accumulates edges while enforcing simplicity, so each error carries the
/// line it came from.
struct EdgeCollector {
    n: usize,
    declared: usize,
    edges: Vec<(VertexId, VertexId)>,
    seen: std::collections::HashSet<(VertexId, VertexId)>,
}

impl EdgeCollector {
    fn new(n: usize, declared: usize) -> Self {
        EdgeCollector { n, declared, edges: Vec::with_capacity(declared.min(1 << 24)), seen: Default::default() }
    }

    /// `u`, `v` are the ids as written; `base` is subtracted to make them 0-based.
    fn push(&mut self, u: i64, v: i64, base: i64, line: usize) -> Result<(), ParseError> {
        let to_index = |x: i64| -> Result<VertexId, ParseError> {
            let i = x - base;
            if i < 0 || i as u64 >= self.n as u64 {
                Err(err(line, ParseErrorKind::OutOfRange { vertex: x, n: self.n }))
            } else {
                Ok(i as VertexId)
            }
        };
        let (a, b) = (to_index(u)?, to_index(v)?);
        if a == b {
            return Err(err(line, ParseErrorKind::SelfLoop(u)));
        }
        if self.edges.len() == self.declared {
            return Err(err(line, ParseErrorKind::CountMismatch { declared: self.declared, found: self.declared + 1 }));
        }
        if !self.seen.insert((a.min(b), a.max(b))) {
            return Err(err(line, ParseErrorKind::DuplicateEdge(u, v)));
        }
        self.edges.push((a, b));
        Ok(())
    }

    fn finish(self) -> Result<Graph, ParseError> {
        if self.edges.len() != self.declared {
            return Err(err(0, ParseErrorKind::CountMismatch { declared: self.declared, found: self.edges.len() }));
        }
        Graph::from_edges(self.n, &self.edges).map_err(|e| match e {
            // unreachable after the per-line checks, kept for completeness
            GraphError::VertexOutOfRange { vertex, n } => {
                err(0, ParseErrorKind::OutOfRange { vertex: vertex as i64, n })
            }
            GraphError::SelfLoop(v) => err(0, ParseErrorKind::SelfLoop(v as i64)),
            GraphError::DuplicateEdge(u, v) => err(0, ParseErrorKind::DuplicateEdge(u as i64, v as i64)),
            e @ GraphError::TooLarge { .. } => err(0, ParseErrorKind::Malformed(e.to_string())),
        })
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::EdgeList => parse_edgelist(text),
        Format::Dimacs => parse_dimacs(text),
    }
}

fn parse_edgelist(text: &str) -> Result<Graph, ParseError> {
    let mut collector: Option<EdgeCollector> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            return Err(err(line_no, ParseErrorKind::Malformed(format!("expected two fields, found {}", toks.len()))));
        }
        match collector.as_mut() {
            None => {
                let n: usize = parse_num(toks[0], line_no)?;
                let m: usize = parse_num(toks[1], line_no)?;
                collector = Some(EdgeCollector::new(n, m));
            }
            Some(c) => {
                let u: i64 = parse_num(toks[0], line_no)?;
                let v: i64 = parse_num(toks[1], line_no)?;
                c.push(u, v, 0, line_no)?;
            }
        }
    }
    collector.ok_or_else(|| err(0, ParseErrorKind::MissingHeader))?.finish()
}

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut collector: Option<EdgeCollector> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if collector.is_some() {
                    return Err(err(line_no, ParseErrorKind::Malformed("second `p` line".into())));
                }
                if toks.len() != 4 || toks[1] != "edge" {
                    return Err(err(line_no, ParseErrorKind::Malformed("expected `p edge <n> <m>`".into())));
                }
                let n: usize = parse_num(toks[2], line_no)?;
                let m: usize = parse_num(toks[3], line_no)?;
                collector = Some(EdgeCollector::new(n, m));
            }
            Some("e") => {
                let c = collector.as_mut().ok_or_else(|| err(line_no, ParseErrorKind::MissingHeader))?;
                if toks.len() != 3 {
                    return Err(err(line_no, ParseErrorKind::Malformed("expected `e <u> <v>`".into())));
                }
                let u: i64 = parse_num(toks[1], line_no)?;
                let v: i64 = parse_num(toks[2], line_no)?;
                c.push(u, v, 1, line_no)?;
            }
            Some(other) => {
                return Err(err(line_no, ParseErrorKind::Malformed(format!("unknown line type `{other}`"))));
            }
        }
    }
    collector.ok_or_else(|| err(0, ParseErrorKind::MissingHeader))?.finish()
}

/// Writes `g` with edges sorted as `(min, max)` pairs. Output ends with a newline.
pub fn serialize(g: &Graph, format: Format) -> String {
    let edges = g.sorted_edges();
    let mut out = String::with_capacity(16 * (edges.len() + 1));
    match format {
        Format::EdgeList => {
            let _ = writeln!(out, "{} {}", g.n(), g.m());
            for (u, v) in edges {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        Format::Dimacs => {
            let _ = writeln!(out, "p edge {} {}", g.n(), g.m());
            for (u, v) in edges {
                let _ = writeln!(out, "e {} {}", u + 1, v + 1);
            }
        }
    }
    out
}

/// Graphviz export. With a tree, tree edges are drawn solid and the rest dashed.
pub fn to_dot(g: &Graph, tree: Option<&SpanningTree>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices().filter(|&v| g.degree(v) == 0) {
        let _ = writeln!(out, "  {v};");
    }
    for (u, v) in g.sorted_edges() {
        match tree {
            None => {
                let _ = writeln!(out, "  {u} -- {v};");
            }
            Some(t) => {
                let style = if t.has_edge(u, v) { "solid" } else { "dashed" };
                let _ = writeln!(out, "  {u} -- {v} [style={style}];");
            }
        }
    }
    out.push_str("}\n");
    out
}
