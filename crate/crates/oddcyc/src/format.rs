//! Text formats for graphs: edge lists, graph6 with a terminal sidecar, and
//! Graphviz DOT.
//!
//! Edge list:
//!
//! ```text
//! n=3 s=0 t=1
//! 0 1
//! 0 2
//! 1 2
//! ```
//!
//! Pairs are normalised (`u < v`) and sorted on output. `s=`/`t=` may be
//! omitted for graphs without terminals. The parser also takes the compact
//! one-line form `3; 0 1; 1 2; 0 2; terminals 0 1`. Lines starting with `#`
//! are ignored.
//!
//! graph6 is the standard encoding; terminals go on a second line
//! `t <s> <t>`.

use std::fmt;
use std::str::FromStr;

use oddcyc_core::{Graph, LabeledGraph};

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A graph with optional terminals, as read from a file. Equality ignores
/// the order edges were listed in.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Graph,
    pub terminals: Option<(usize, usize)>,
}

impl PartialEq for GraphFile {
    fn eq(&self, other: &Self) -> bool {
        self.terminals == other.terminals
            && self.graph.vertex_count() == other.graph.vertex_count()
            && self.graph.sorted_edges() == other.graph.sorted_edges()
    }
}

impl Eq for GraphFile {}

impl GraphFile {
    pub fn plain(graph: Graph) -> Self {
        Self {
            graph,
            terminals: None,
        }
    }

    pub fn labeled(g: &LabeledGraph) -> Self {
        Self {
            graph: g.graph.clone(),
            terminals: Some((g.s, g.t)),
        }
    }

    /// The labelled graph, if terminals are present.
    pub fn to_labeled(&self) -> Option<LabeledGraph> {
        let (s, t) = self.terminals?;
        LabeledGraph::new(self.graph.clone(), s, t).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Edgelist,
    Graph6,
    Dot,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edgelist" => Ok(Format::Edgelist),
            "graph6" => Ok(Format::Graph6),
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Edgelist => "edgelist",
            Format::Graph6 => "graph6",
            Format::Dot => "dot",
            Format::Json => "json",
        })
    }
}

fn build(n: usize, edges: &[(usize, usize)], terminals: Option<(usize, usize)>, line: usize) -> Result<GraphFile, ParseError> {
    let graph = Graph::new(n, edges).map_err(|e| ParseError::at(line, 1, e.to_string()))?;
    if let Some((s, t)) = terminals {
        if s >= n || t >= n || s == t {
            return Err(ParseError::at(line, 1, format!("bad terminals {s} {t} for {n} vertices")));
        }
    }
    Ok(GraphFile { graph, terminals })
}

fn number(tok: &str, line: usize, column: usize) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::at(line, column, format!("expected a vertex id, found {tok:?}")))
}

// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &text[s..]));
    }
    out
}

pub fn emit_edgelist(g: &GraphFile) -> String {
    let mut out = format!("n={}", g.graph.vertex_count());
    if let Some((s, t)) = g.terminals {
        out.push_str(&format!(" s={s} t={t}"));
    }
    out.push('\n');
    for (u, v) in g.graph.sorted_edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_edgelist(text: &str) -> Result<GraphFile, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let Some(&(first_no, first)) = lines.first() else {
        return Err(ParseError::at(1, 1, "empty input"));
    };
    if first.contains(';') {
        if lines.len() > 1 {
            return Err(ParseError::at(lines[1].0, 1, "compact form must be a single line"));
        }
        return parse_compact(first, first_no);
    }
    let mut n = None;
    let (mut s, mut t) = (None, None);
    for (col, tok) in tokens(first) {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| ParseError::at(first_no, col, format!("expected key=value, found {tok:?}")))?;
        let val = number(val, first_no, col + key.len() + 1)?;
        match key {
            "n" => n = Some(val),
            "s" => s = Some(val),
            "t" => t = Some(val),
            _ => return Err(ParseError::at(first_no, col, format!("unknown header key {key:?}"))),
        }
    }
    let n = n.ok_or_else(|| ParseError::at(first_no, 1, "header lacks n="))?;
    let terminals = match (s, t) {
        (Some(s), Some(t)) => Some((s, t)),
        (None, None) => None,
        _ => return Err(ParseError::at(first_no, 1, "give both s= and t= or neither")),
    };
    let mut edges = Vec::new();
    for &(no, line) in &lines[1..] {
        let toks = tokens(line);
        if toks.len() != 2 {
            return Err(ParseError::at(no, 1, format!("expected two vertex ids, found {}", toks.len())));
        }
        let u = number(toks[0].1, no, toks[0].0)?;
        let v = number(toks[1].1, no, toks[1].0)?;
        for (x, col) in [(u, toks[0].0), (v, toks[1].0)] {
            if x >= n {
                return Err(ParseError::at(no, col, format!("vertex {x} out of range for n={n}")));
            }
        }
        edges.push((u, v));
    }
    build(n, &edges, terminals, first_no)
}

fn parse_compact(line: &str, no: usize) -> Result<GraphFile, ParseError> {
    let mut offset = 0;
    let mut n = None;
    let mut edges = Vec::new();
    let mut terminals = None;
    for part in line.split(';') {
        let col = offset + 1;
        offset += part.len() + 1;
        let toks: Vec<(usize, &str)> = tokens(part).into_iter().map(|(c, t)| (c + col - 1, t)).collect();
        match toks.as_slice() {
            [] => continue,
            [(c, v)] if n.is_none() => n = Some(number(v, no, *c)?),
            [(_, "terminals"), (c1, a), (c2, b)] => terminals = Some((number(a, no, *c1)?, number(b, no, *c2)?)),
            [(c1, a), (c2, b)] if n.is_some() => edges.push((number(a, no, *c1)?, number(b, no, *c2)?)),
            [(c, _), ..] => return Err(ParseError::at(no, *c, format!("unexpected {:?}", part.trim()))),
        }
    }
    let n = n.ok_or_else(|| ParseError::at(no, 1, "missing vertex count"))?;
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
        return Err(ParseError::at(no, 1, format!("edge {u} {v} out of range for n={n}")));
    }
    build(n, &edges, terminals, no)
}

pub fn emit_graph6(g: &GraphFile) -> String {
    let n = g.graph.vertex_count();
    let mut bytes = Vec::new();
    if n < 63 {
        bytes.push(n as u8 + 63);
    } else {
        bytes.push(126);
        for shift in [12, 6, 0] {
            bytes.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(g.graph.has_edge(i, j));
        }
    }
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                v |= 1 << (5 - k);
            }
        }
        bytes.push(v + 63);
    }
    let mut out = String::from_utf8(bytes).expect("graph6 is printable ASCII");
    out.push('\n');
    if let Some((s, t)) = g.terminals {
        out.push_str(&format!("t {s} {t}\n"));
    }
    out
}

pub fn parse_graph6(text: &str) -> Result<GraphFile, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (idx, code) = lines.next().ok_or_else(|| ParseError::at(1, 1, "empty input"))?;
    let no = idx + 1;
    let code = code.trim().strip_prefix(">>graph6<<").unwrap_or(code.trim());
    let bytes = code.as_bytes();
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(ParseError::at(no, pos + 1, "byte outside the graph6 range"));
    }
    let (n, at) = match bytes.first() {
        None => return Err(ParseError::at(no, 1, "empty graph6 string")),
        Some(126) => {
            if bytes.len() < 4 || bytes[1] == 126 {
                return Err(ParseError::at(no, 2, "unsupported graph6 size prefix"));
            }
            let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if bytes.len() - at != needed {
        return Err(ParseError::at(no, at + 1, format!("expected {needed} data bytes for n={n}, found {}", bytes.len() - at)));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[at + k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    let mut terminals = None;
    if let Some((idx, side)) = lines.next() {
        let toks = tokens(side);
        match toks.as_slice() {
            [(_, "t"), (c1, s), (c2, t)] => {
                terminals = Some((number(s, idx + 1, *c1)?, number(t, idx + 1, *c2)?));
            }
            _ => return Err(ParseError::at(idx + 1, 1, "expected sidecar `t <s> <t>`")),
        }
        if let Some((idx, _)) = lines.next() {
            return Err(ParseError::at(idx + 1, 1, "trailing input"));
        }
    }
    build(n, &edges, terminals, no)
}

pub fn emit_dot(g: &GraphFile, name: &str) -> String {
    let mut out = format!("graph \"{name}\" {{\n");
    for v in 0..g.graph.vertex_count() {
        match g.terminals {
            Some((s, _)) if s == v => out.push_str(&format!("  {v} [shape=doublecircle, label=\"s\"];\n")),
            Some((_, t)) if t == v => out.push_str(&format!("  {v} [shape=doublecircle, label=\"t\"];\n")),
            _ => out.push_str(&format!("  {v};\n")),
        }
    }
    for (u, v) in g.graph.sorted_edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}

/// Reads the DOT this module writes: numbered nodes, `--` edges, and
/// terminals marked by `label="s"` / `label="t"`.
pub fn parse_dot(text: &str) -> Result<GraphFile, ParseError> {
    let mut n = 0;
    let mut edges = Vec::new();
    let (mut s, mut t) = (None, None);
    let mut opened = false;
    let mut closed = false;
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let line = raw.trim();
        let col = raw.len() - raw.trim_start().len() + 1;
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        if !opened {
            if line.starts_with("graph") && line.ends_with('{') {
                opened = true;
                continue;
            }
            return Err(ParseError::at(no, col, "expected `graph ... {`"));
        }
        if closed {
            return Err(ParseError::at(no, col, "content after closing brace"));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let body = line
            .strip_suffix(';')
            .ok_or_else(|| ParseError::at(no, col + line.len(), "missing `;`"))?;
        if let Some((a, b)) = body.split_once("--") {
            let u = number(a.trim(), no, col)?;
            let v = number(b.trim(), no, col + a.len() + 2)?;
            n = n.max(u + 1).max(v + 1);
            edges.push((u, v));
        } else {
            let (id, attrs) = match body.split_once('[') {
                Some((id, attrs)) => (id.trim(), Some(attrs)),
                None => (body.trim(), None),
            };
            let v = number(id, no, col)?;
            n = n.max(v + 1);
            if let Some(attrs) = attrs {
                if attrs.contains("label=\"s\"") {
                    s = Some(v);
                } else if attrs.contains("label=\"t\"") {
                    t = Some(v);
                }
            }
        }
    }
    if !closed {
        return Err(ParseError::at(text.lines().count().max(1), 1, "missing closing brace"));
    }
    let terminals = match (s, t) {
        (Some(s), Some(t)) => Some((s, t)),
        (None, None) => None,
        _ => return Err(ParseError::at(1, 1, "only one terminal marked")),
    };
    build(n, &edges, terminals, 1)
}

/// Parses by explicit format, or guesses from the content when `None`.
pub fn parse_any(text: &str, format: Option<Format>) -> Result<GraphFile, ParseError> {
    let format = format.unwrap_or_else(|| sniff(text));
    match format {
        Format::Edgelist => parse_edgelist(text),
        Format::Graph6 => parse_graph6(text),
        Format::Dot => parse_dot(text),
        Format::Json => Err(ParseError::at(1, 1, "json is an output-only format")),
    }
}

fn sniff(text: &str) -> Format {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with("graph") || first.starts_with("strict") {
        Format::Dot
    } else if first.starts_with("n=") || first.contains(';') || first.chars().all(|c| c.is_ascii_digit() || c.is_whitespace()) {
        Format::Edgelist
    } else {
        Format::Graph6
    }
}
