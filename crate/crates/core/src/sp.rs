//! Series-parallel expressions and their 2-terminal graphs.
//!
//! An [`SpExpr`] is oriented: a serial node lists its parts from `s` to `t`.
//! Canonical keys forget both the order of parallel parts and the
//! orientation, so `(G, s, t)` and `(G, t, s)` share a key.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabeledGraph};

/// A series-parallel expression tree.
///
/// The smart constructors [`SpExpr::serial_sum`] and [`SpExpr::parallel_sum`]
/// keep trees flat (no serial child under a serial node, no parallel child
/// under a parallel node). Hand-built trees need not be flat; every consumer
/// in this crate accepts them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpExpr {
    Edge,
    Serial(Vec<SpExpr>),
    Parallel(Vec<SpExpr>),
}

/// Isomorphism key of a 2-terminal graph, terminals unordered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(pub Vec<u8>);

/// Isomorphism key of a series-parallel graph with no terminals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphKey(pub Vec<u8>);

impl fmt::Display for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(core::str::from_utf8(&self.0).unwrap_or("?"))
    }
}

impl fmt::Display for GraphKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(core::str::from_utf8(&self.0).unwrap_or("?"))
    }
}

const EDGE: u8 = b'e';
const SERIAL: u8 = b'S';
const PARALLEL: u8 = b'P';
const CLOSE: u8 = b')';

impl SpExpr {
    pub fn edge() -> SpExpr {
        SpExpr::Edge
    }

    /// `a + b`: the end terminal of `a` is glued to the start terminal of `b`.
    pub fn serial_sum(a: SpExpr, b: SpExpr) -> SpExpr {
        let mut parts = Vec::new();
        for x in [a, b] {
            match x {
                SpExpr::Serial(cs) => parts.extend(cs),
                other => parts.push(other),
            }
        }
        SpExpr::Serial(parts)
    }

    /// `a ∥ b`: both pairs of terminals are glued.
    pub fn parallel_sum(a: SpExpr, b: SpExpr) -> Result<SpExpr> {
        let mut parts = Vec::new();
        for x in [a, b] {
            match x {
                SpExpr::Parallel(cs) => parts.extend(cs),
                other => parts.push(other),
            }
        }
        if parts.iter().filter(|p| **p == SpExpr::Edge).count() > 1 {
            return Err(Error::MultiEdge);
        }
        Ok(SpExpr::Parallel(parts))
    }

    /// Path with `edges` edges between the terminals.
    pub fn path(edges: usize) -> SpExpr {
        assert!(edges >= 1, "a path needs at least one edge");
        if edges == 1 {
            SpExpr::Edge
        } else {
            SpExpr::Serial(vec![SpExpr::Edge; edges])
        }
    }

    /// The same graph with its terminals swapped.
    pub fn reversed(&self) -> SpExpr {
        match self {
            SpExpr::Edge => SpExpr::Edge,
            SpExpr::Serial(cs) => SpExpr::Serial(cs.iter().rev().map(SpExpr::reversed).collect()),
            SpExpr::Parallel(cs) => SpExpr::Parallel(cs.iter().map(SpExpr::reversed).collect()),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            SpExpr::Edge => 1,
            SpExpr::Serial(cs) | SpExpr::Parallel(cs) => cs.iter().map(SpExpr::edge_count).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.internal_vertices() + 2
    }

    fn internal_vertices(&self) -> usize {
        match self {
            SpExpr::Edge => 0,
            SpExpr::Serial(cs) => {
                cs.iter().map(SpExpr::internal_vertices).sum::<usize>() + cs.len().saturating_sub(1)
            }
            SpExpr::Parallel(cs) => cs.iter().map(SpExpr::internal_vertices).sum(),
        }
    }

    pub fn is_serial(&self) -> bool {
        matches!(self, SpExpr::Serial(_))
    }

    pub fn is_parallel(&self) -> bool {
        matches!(self, SpExpr::Parallel(_))
    }

    /// Builds the 2-terminal graph. Terminals are `s = 0` and `t = 1`; inner
    /// vertices are numbered in order of first appearance in a left-to-right
    /// walk of the tree, and edge `i` is the `i`-th leaf in that walk.
    pub fn realize(&self) -> Result<LabeledGraph> {
        let mut next = 2usize;
        let mut edges = Vec::with_capacity(self.edge_count());
        build(self, 0, 1, &mut next, &mut edges)?;
        let graph = Graph::new(next, &edges).map_err(|e| match e {
            Error::InvalidGraph(msg) if msg.starts_with("parallel edge") => Error::MultiEdge,
            other => other,
        })?;
        LabeledGraph::new(graph, 0, 1)
    }

    /// Key invariant under reordering parallel parts and swapping terminals.
    pub fn canonical_key(&self) -> CanonKey {
        let fwd = self.oriented_key(false);
        let rev = self.oriented_key(true);
        CanonKey(fwd.min(rev))
    }

    /// Key of this orientation only (parallel order still forgotten).
    pub fn oriented_key(&self, reversed: bool) -> Vec<u8> {
        let mut out = Vec::new();
        write_key(self, reversed, &mut out);
        out
    }

    /// Rebuilds an expression from a key produced by [`SpExpr::oriented_key`]
    /// or [`SpExpr::canonical_key`].
    pub fn from_key(key: &[u8]) -> Result<SpExpr> {
        let (e, used) = parse_key(key, 0)?;
        if used != key.len() {
            return Err(Error::InvalidGraph(format!("trailing bytes in key at {used}")));
        }
        Ok(e)
    }
}

fn build(
    e: &SpExpr,
    a: usize,
    b: usize,
    next: &mut usize,
    edges: &mut Vec<(usize, usize)>,
) -> Result<()> {
    match e {
        SpExpr::Edge => edges.push((a, b)),
        SpExpr::Serial(cs) | SpExpr::Parallel(cs) if cs.is_empty() => {
            return Err(Error::InvalidGraph("empty composition".into()));
        }
        SpExpr::Serial(cs) => {
            let mut cur = a;
            for (i, c) in cs.iter().enumerate() {
                let end = if i + 1 == cs.len() {
                    b
                } else {
                    let v = *next;
                    *next += 1;
                    v
                };
                build(c, cur, end, next, edges)?;
                cur = end;
            }
        }
        SpExpr::Parallel(cs) => {
            for c in cs {
                build(c, a, b, next, edges)?;
            }
        }
    }
    Ok(())
}

fn write_key(e: &SpExpr, rev: bool, out: &mut Vec<u8>) {
    match e {
        SpExpr::Edge => out.push(EDGE),
        SpExpr::Serial(cs) if cs.len() == 1 => write_key(&cs[0], rev, out),
        SpExpr::Parallel(cs) if cs.len() == 1 => write_key(&cs[0], rev, out),
        SpExpr::Serial(_) => {
            let mut parts = Vec::new();
            serial_parts(e, rev, &mut parts);
            out.push(SERIAL);
            for p in parts {
                out.extend_from_slice(&p);
            }
            out.push(CLOSE);
        }
        SpExpr::Parallel(_) => {
            let mut parts = Vec::new();
            parallel_parts(e, rev, &mut parts);
            parts.sort_unstable();
            out.push(PARALLEL);
            for p in parts {
                out.extend_from_slice(&p);
            }
            out.push(CLOSE);
        }
    }
}

fn serial_parts(e: &SpExpr, rev: bool, parts: &mut Vec<Vec<u8>>) {
    match e {
        SpExpr::Serial(cs) => {
            if rev {
                cs.iter().rev().for_each(|c| serial_parts(c, rev, parts));
            } else {
                cs.iter().for_each(|c| serial_parts(c, rev, parts));
            }
        }
        other => {
            let mut k = Vec::new();
            write_key(other, rev, &mut k);
            parts.push(k);
        }
    }
}

fn parallel_parts(e: &SpExpr, rev: bool, parts: &mut Vec<Vec<u8>>) {
    match e {
        SpExpr::Parallel(cs) => cs.iter().for_each(|c| parallel_parts(c, rev, parts)),
        other => {
            let mut k = Vec::new();
            write_key(other, rev, &mut k);
            parts.push(k);
        }
    }
}

fn parse_key(key: &[u8], at: usize) -> Result<(SpExpr, usize)> {
    let bad = || Error::InvalidGraph(format!("malformed key at byte {at}"));
    match key.get(at) {
        Some(&EDGE) => Ok((SpExpr::Edge, at + 1)),
        Some(&kind @ (SERIAL | PARALLEL)) => {
            let mut children = Vec::new();
            let mut pos = at + 1;
            while key.get(pos) != Some(&CLOSE) {
                if pos >= key.len() {
                    return Err(bad());
                }
                let (c, next) = parse_key(key, pos)?;
                children.push(c);
                pos = next;
            }
            if children.len() < 2 {
                return Err(bad());
            }
            let e = if kind == SERIAL {
                SpExpr::Serial(children)
            } else {
                SpExpr::Parallel(children)
            };
            Ok((e, pos + 1))
        }
        _ => Err(bad()),
    }
}

/// Series/parallel reduction with fixed terminals.
///
/// Repeatedly merges parallel edges and contracts inner vertices of degree
/// two until a single `s`–`t` edge is left. The returned expression is
/// oriented from `g.s` to `g.t`.
pub fn recognize_sp(g: &LabeledGraph) -> Result<SpExpr> {
    let n = g.graph.vertex_count();
    // Each live edge carries the expression it stands for, oriented u -> v.
    let mut live: Vec<Option<(usize, usize, SpExpr)>> = g
        .graph
        .edges()
        .iter()
        .map(|&(u, v)| Some((u, v, SpExpr::Edge)))
        .collect();
    let mut eliminated = vec![false; n];

    loop {
        let mut changed = false;

        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (id, e) in live.iter().enumerate() {
            if let Some((u, v, _)) = e {
                groups.entry(((*u).min(*v), (*u).max(*v))).or_default().push(id);
            }
        }
        for ((u, v), ids) in groups {
            if ids.len() < 2 {
                continue;
            }
            let mut parts = Vec::new();
            for id in &ids {
                let (a, _, e) = live[*id].take().expect("grouped edge is live");
                let e = if a == u { e } else { e.reversed() };
                match e {
                    SpExpr::Parallel(cs) => parts.extend(cs),
                    other => parts.push(other),
                }
            }
            live[ids[0]] = Some((u, v, SpExpr::Parallel(parts)));
            changed = true;
        }

        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (id, e) in live.iter().enumerate() {
            if let Some((u, v, _)) = e {
                incident[*u].push(id);
                incident[*v].push(id);
            }
        }
        for x in 0..n {
            if x == g.s || x == g.t || incident[x].len() != 2 {
                continue;
            }
            let (i1, i2) = (incident[x][0], incident[x][1]);
            let (Some(e1), Some(e2)) = (&live[i1], &live[i2]) else {
                continue;
            };
            let u = if e1.0 == x { e1.1 } else { e1.0 };
            let w = if e2.0 == x { e2.1 } else { e2.0 };
            if u == w {
                continue;
            }
            let (a1, _, x1) = live[i1].take().expect("live");
            let (a2, _, x2) = live[i2].take().expect("live");
            // Orient u -> x and x -> w.
            let left = if a1 == u { x1 } else { x1.reversed() };
            let right = if a2 == x { x2 } else { x2.reversed() };
            live[i1] = Some((u, w, SpExpr::serial_sum(left, right)));
            eliminated[x] = true;
            changed = true;
            // Incidence lists are stale now; rebuild on the next pass.
            break;
        }

        if !changed {
            break;
        }
    }

    let remaining: Vec<_> = live.into_iter().flatten().collect();
    let all_gone = (0..n).all(|v| v == g.s || v == g.t || eliminated[v]);
    match remaining.as_slice() {
        [(u, v, e)] if all_gone && (*u, *v) == (g.s, g.t) => Ok(e.clone()),
        [(u, v, e)] if all_gone && (*u, *v) == (g.t, g.s) => Ok(e.reversed()),
        _ => Err(Error::NotSeriesParallel),
    }
}

/// Tries every terminal pair `s < t` in lexicographic order and returns the
/// first that admits a series-parallel construction.
pub fn recognize_any(g: &Graph) -> Result<(usize, usize, SpExpr)> {
    let n = g.vertex_count();
    for s in 0..n {
        for t in s + 1..n {
            let lg = LabeledGraph::new(g.clone(), s, t)?;
            if let Ok(e) = recognize_sp(&lg) {
                return Ok((s, t, e));
            }
        }
    }
    Err(Error::NotSeriesParallel)
}

/// Terminal-free isomorphism key: the least canonical key over all terminal
/// pairs from which the graph is series-parallel.
pub fn graph_key(g: &Graph) -> Result<GraphKey> {
    let n = g.vertex_count();
    let mut best: Option<CanonKey> = None;
    for s in 0..n {
        for t in s + 1..n {
            let lg = LabeledGraph::new(g.clone(), s, t)?;
            if let Ok(e) = recognize_sp(&lg) {
                let k = e.canonical_key();
                if best.as_ref().is_none_or(|b| k < *b) {
                    best = Some(k);
                }
            }
        }
    }
    best.map(|k| GraphKey(k.0)).ok_or(Error::NotSeriesParallel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> SpExpr {
        SpExpr::path(2)
    }

    fn c5_dist2() -> SpExpr {
        SpExpr::parallel_sum(SpExpr::path(3), SpExpr::path(2)).unwrap()
    }

    #[test]
    fn serial_sums_flatten() {
        let p4 = SpExpr::serial_sum(p3(), SpExpr::Edge);
        assert_eq!(p4, SpExpr::Serial(vec![SpExpr::Edge; 3]));
        let g = p3().realize().unwrap();
        assert_eq!(g.graph.vertex_count(), 3);
        assert_eq!((g.s, g.t), (0, 1));
        assert_eq!(g.graph.degree(0), 1);
        assert_eq!(g.graph.degree(1), 1);
    }

    #[test]
    fn parallel_sums() {
        let k3 = SpExpr::parallel_sum(SpExpr::Edge, p3()).unwrap();
        let g = k3.realize().unwrap();
        assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (3, 3));
        let c5 = c5_dist2().realize().unwrap();
        assert_eq!((c5.graph.vertex_count(), c5.graph.edge_count()), (5, 5));
        assert_eq!(c5.graph.girth(), Some(5));
        assert_eq!(SpExpr::parallel_sum(SpExpr::Edge, SpExpr::Edge), Err(Error::MultiEdge));
        let hand = SpExpr::Parallel(vec![SpExpr::Edge, SpExpr::Edge]);
        assert_eq!(hand.realize(), Err(Error::MultiEdge));
    }

    #[test]
    fn two_pentagons_in_series() {
        let h = SpExpr::serial_sum(c5_dist2(), c5_dist2());
        let g = h.realize().unwrap();
        assert_eq!(g.graph.vertex_count(), 9);
        assert_eq!(g.graph.girth(), Some(5));
        assert!(g.graph.two_c5_sharing_vertex().unwrap());
        assert_eq!(h.vertex_count(), 9);
    }

    #[test]
    fn key_invariances() {
        let a = p3();
        let b = SpExpr::serial_sum(SpExpr::Edge, c5_dist2());
        let ab = SpExpr::parallel_sum(a.clone(), b.clone()).unwrap();
        let ba = SpExpr::parallel_sum(b.clone(), a.clone()).unwrap();
        assert_eq!(ab.canonical_key(), ba.canonical_key());
        let s1 = SpExpr::serial_sum(a.clone(), b.clone());
        let s2 = SpExpr::serial_sum(b.reversed(), a.reversed());
        assert_eq!(s1.canonical_key(), s2.canonical_key());
        assert_ne!(
            SpExpr::serial_sum(a.clone(), b.clone()).canonical_key(),
            SpExpr::serial_sum(a.clone(), b.reversed()).canonical_key()
        );
        let l = SpExpr::serial_sum(SpExpr::Edge, p3());
        let r = SpExpr::serial_sum(p3(), SpExpr::Edge);
        assert_eq!(l.canonical_key(), r.canonical_key());
        // Unflattened hand-built trees key like their flat forms.
        let nested = SpExpr::Serial(vec![SpExpr::Edge, SpExpr::Serial(vec![SpExpr::Edge; 2])]);
        assert_eq!(nested.canonical_key(), SpExpr::path(3).canonical_key());
    }

    #[test]
    fn key_round_trip() {
        let e = SpExpr::parallel_sum(SpExpr::serial_sum(SpExpr::Edge, c5_dist2()), p3()).unwrap();
        let key = e.canonical_key();
        assert_eq!(SpExpr::from_key(&key.0).unwrap().canonical_key(), key);
        assert!(SpExpr::from_key(b"S e)").is_err());
        assert!(SpExpr::from_key(b"Se)").is_err());
        assert!(SpExpr::from_key(b"ee").is_err());
    }

    #[test]
    fn recognise_triangle_and_k4() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        for (s, t) in [(0, 1), (1, 2), (2, 0)] {
            let e = recognize_sp(&LabeledGraph::new(k3.clone(), s, t).unwrap()).unwrap();
            assert_eq!(
                e.canonical_key(),
                SpExpr::parallel_sum(SpExpr::Edge, p3()).unwrap().canonical_key()
            );
        }
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    let lg = LabeledGraph::new(k4.clone(), s, t).unwrap();
                    assert_eq!(recognize_sp(&lg), Err(Error::NotSeriesParallel));
                }
            }
        }
        assert_eq!(recognize_any(&k4), Err(Error::NotSeriesParallel));
    }

    #[test]
    fn recognise_rejects_dangling_parts() {
        // Pendant vertex 3 hanging off vertex 2 of a path 0-2-1.
        let g = Graph::new(4, &[(0, 2), (2, 1), (2, 3)]).unwrap();
        assert!(recognize_sp(&LabeledGraph::new(g, 0, 1).unwrap()).is_err());
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        assert!(recognize_sp(&LabeledGraph::new(g, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn recognise_orients_from_s() {
        // P4 with the extra pendant-free chord making a triangle at the s end.
        let e = SpExpr::serial_sum(
            SpExpr::parallel_sum(SpExpr::Edge, p3()).unwrap(),
            SpExpr::path(2),
        );
        let g = e.realize().unwrap();
        let back = recognize_sp(&g).unwrap();
        assert_eq!(back.oriented_key(false), e.oriented_key(false));
        let back = recognize_sp(&g.reversed()).unwrap();
        assert_eq!(back.oriented_key(false), e.oriented_key(true));
    }

    #[test]
    fn graph_keys_forget_terminals() {
        let a = SpExpr::parallel_sum(SpExpr::path(3), SpExpr::path(2)).unwrap();
        let b = SpExpr::parallel_sum(SpExpr::path(4), SpExpr::Edge).unwrap();
        // Both are C5; only the terminal distance differs.
        assert_ne!(a.canonical_key(), b.canonical_key());
        let ka = graph_key(&a.realize().unwrap().graph).unwrap();
        let kb = graph_key(&b.realize().unwrap().graph).unwrap();
        assert_eq!(ka, kb);
    }
}
