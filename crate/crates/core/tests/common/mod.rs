//! Brute-force isomorphism used as an independent check on canonical keys.
#![allow(dead_code)]

use oddcyc_core::{Graph, LabeledGraph};

fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// Whether some bijection maps `g` onto `h` and `fixed[i].0` to `fixed[i].1`.
fn extend(a: &[Vec<bool>], b: &[Vec<bool>], da: &[usize], db: &[usize], map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, v: usize) -> bool {
    let n = a.len();
    if v == n {
        return true;
    }
    if map[v].is_some() {
        return extend(a, b, da, db, map, used, v + 1);
    }
    for w in 0..n {
        if used[w] || da[v] != db[w] {
            continue;
        }
        let ok = (0..n).all(|x| match map[x] {
            Some(y) => a[v][x] == b[w][y],
            None => true,
        });
        if ok {
            map[v] = Some(w);
            used[w] = true;
            if extend(a, b, da, db, map, used, v + 1) {
                return true;
            }
            map[v] = None;
            used[w] = false;
        }
    }
    false
}

fn iso_with(g: &Graph, h: &Graph, fixed: &[(usize, usize)]) -> bool {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let (a, b) = (adjacency(g), adjacency(h));
    let n = a.len();
    let da: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let db: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    for &(x, y) in fixed {
        if da[x] != db[y] || used[y] {
            return false;
        }
        map[x] = Some(y);
        used[y] = true;
    }
    for &(x, y) in fixed {
        for &(x2, y2) in fixed {
            if a[x][x2] != b[y][y2] {
                return false;
            }
        }
    }
    extend(&a, &b, &da, &db, &mut map, &mut used, 0)
}

/// 2-terminal isomorphism; terminals may swap.
pub fn terminal_iso(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    iso_with(&g.graph, &h.graph, &[(g.s, h.s), (g.t, h.t)])
        || iso_with(&g.graph, &h.graph, &[(g.s, h.t), (g.t, h.s)])
}

pub fn graph_iso(g: &Graph, h: &Graph) -> bool {
    iso_with(g, h, &[])
}

fn distances(g: &Graph, from: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; g.vertex_count()];
    let mut q = std::collections::VecDeque::from([from]);
    d[from] = 0;
    while let Some(v) = q.pop_front() {
        for &w in g.neighbours(v) {
            if d[w] == usize::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// Invariant of the 2-terminal isomorphism class, for bucketing.
pub fn terminal_invariant(g: &LabeledGraph) -> Vec<(usize, usize, usize)> {
    let (ds, dt) = (distances(&g.graph, g.s), distances(&g.graph, g.t));
    let n = g.graph.vertex_count();
    let mut fwd: Vec<_> = (0..n).map(|v| (g.graph.degree(v), ds[v], dt[v])).collect();
    let mut rev: Vec<_> = (0..n).map(|v| (g.graph.degree(v), dt[v], ds[v])).collect();
    fwd.sort();
    rev.sort();
    fwd.min(rev)
}

/// Invariant of the plain isomorphism class, for bucketing.
pub fn graph_invariant(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    let mut out: Vec<_> = (0..g.vertex_count())
        .map(|v| {
            let mut d = distances(g, v);
            d.sort();
            (g.degree(v), d)
        })
        .collect();
    out.sort();
    out
}
