//! Simple undirected graphs and the structural queries used by the verifiers.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Cycle searches are exponential; they refuse graphs above this size.
pub const CYCLE_SEARCH_LIMIT: usize = 30;

/// A simple undirected graph on vertices `0..n`.
///
/// Edges keep their insertion order; edge indices are stable and are what
/// per-edge witnesses refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {u}-{v} references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::InvalidGraph(format!("parallel edge {u}-{v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            norm.push((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges: norm,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as `(min, max)` pairs, ascending.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    /// The graph with edge `idx` removed; vertices are kept.
    pub fn without_edge(&self, idx: usize) -> Graph {
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, &e)| e)
            .collect();
        Graph::new(self.n, &edges).expect("subgraph of a simple graph")
    }

    /// Induced subgraph on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Graph::new(vertices.len(), &edges).expect("induced subgraph of a simple graph")
    }

    /// Connected components of the graph with `removed` vertices deleted.
    pub fn components_without(&self, removed: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        for &r in removed {
            seen[r] = true;
        }
        let mut comps = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut comp = vec![root];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&[]).len() <= 1
    }

    /// At least three vertices, connected, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        if self.n < 3 || !self.is_connected() {
            return false;
        }
        (0..self.n).all(|v| self.components_without(&[v]).len() == 1)
    }

    fn bfs(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// Length of a shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 0..self.n {
            let (dist, parent) = self.bfs(root);
            for &(u, v) in &self.edges {
                if dist[u] == usize::MAX || parent[u] == v || parent[v] == u {
                    continue;
                }
                let len = dist[u] + dist[v] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
        best
    }

    /// Length of a shortest odd cycle; `None` for bipartite graphs.
    pub fn odd_girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 0..self.n {
            let (dist, _) = self.bfs(root);
            for &(u, v) in &self.edges {
                if dist[u] != usize::MAX && dist[u] == dist[v] {
                    let len = 2 * dist[u] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    fn guard_cycle_search(&self) -> Result<()> {
        if self.n > CYCLE_SEARCH_LIMIT {
            return Err(Error::TooLarge {
                vertices: self.n,
                limit: CYCLE_SEARCH_LIMIT,
            });
        }
        Ok(())
    }

    /// Whether some cycle has exactly `len` vertices. Exhaustive search.
    pub fn has_cycle_of_length(&self, len: usize) -> Result<bool> {
        self.guard_cycle_search()?;
        if len < 3 {
            return Ok(false);
        }
        let mut found = false;
        self.for_each_cycle(len, &mut |_| {
            found = true;
            true
        });
        Ok(found)
    }

    /// Every cycle with `len` vertices, each reported once as a vertex
    /// sequence starting at its smallest vertex with `seq[1] < seq[len-1]`.
    pub fn cycles_of_length(&self, len: usize) -> Result<Vec<Vec<usize>>> {
        self.guard_cycle_search()?;
        let mut out = Vec::new();
        if len >= 3 {
            self.for_each_cycle(len, &mut |c| {
                out.push(c.to_vec());
                false
            });
        }
        Ok(out)
    }

    /// Whether two distinct 5-cycles share a vertex.
    pub fn two_c5_sharing_vertex(&self) -> Result<bool> {
        let cycles = self.cycles_of_length(5)?;
        let masks: Vec<u64> = cycles
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        // Distinct cycles as edge sets; each cycle is listed once, so any two
        // list entries are distinct.
        for i in 0..masks.len() {
            for j in i + 1..masks.len() {
                if masks[i] & masks[j] != 0 {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    // Calls `visit` for each cycle of `len` vertices; stops early when it
    // returns true.
    fn for_each_cycle(&self, len: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
        for start in 0..self.n {
            // Cycles whose minimum vertex is `start` live in vertices >= start.
            let dist = self.dist_within(start);
            let mut path = vec![start];
            let mut on_path = vec![false; self.n];
            on_path[start] = true;
            if self.extend_cycle(start, len, &dist, &mut path, &mut on_path, visit) {
                return;
            }
        }
    }

    fn dist_within(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if w > start && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn extend_cycle(
        &self,
        start: usize,
        len: usize,
        dist: &[usize],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let last = *path.last().expect("path starts at the root");
        if path.len() == len {
            if self.adj[last].contains(&start) && path[1] < last {
                return visit(path);
            }
            return false;
        }
        let remaining = len - path.len();
        for &w in &self.adj[last] {
            if w <= start || on_path[w] || dist[w] == usize::MAX || dist[w] > remaining {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            let stop = self.extend_cycle(start, len, dist, path, on_path, visit);
            on_path[w] = false;
            path.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// A graph with two distinct terminals `s` and `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub s: usize,
    pub t: usize,
}

impl LabeledGraph {
    pub fn new(graph: Graph, s: usize, t: usize) -> Result<Self> {
        if s == t {
            return Err(Error::InvalidGraph(format!("terminals coincide at {s}")));
        }
        if s >= graph.vertex_count() || t >= graph.vertex_count() {
            return Err(Error::InvalidGraph(format!(
                "terminal out of range: s={s} t={t} n={}",
                graph.vertex_count()
            )));
        }
        Ok(Self { graph, s, t })
    }

    /// Same graph with the terminals swapped.
    pub fn reversed(&self) -> LabeledGraph {
        LabeledGraph {
            graph: self.graph.clone(),
            s: self.t,
            t: self.s,
        }
    }

    pub fn without_edge(&self, idx: usize) -> LabeledGraph {
        LabeledGraph {
            graph: self.graph.without_edge(idx),
            s: self.s,
            t: self.t,
        }
    }
}
