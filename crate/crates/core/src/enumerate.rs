//! Exhaustive generation of 2-terminal series-parallel graphs.
//!
//! Classes are built stratum by stratum in the number of edges. A serial
//! class is generated as `head + tail` where `head` is its first part, and a
//! parallel class as `head ∥ rest` where `head` is its least part in a fixed
//! order of oriented classes, so each oriented composition is formed once.
//! Both orientations of a class are produced and collapse on the canonical
//! key.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::hom::Oracle;
use crate::ring::{CycleOrder, SymSet};
use crate::sp::{CanonKey, SpExpr};

/// Size cap on generated graphs; both limits apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Bound {
    pub fn new(max_vertices: usize, max_edges: usize) -> Self {
        Self {
            max_vertices,
            max_edges,
        }
    }

    /// Vertex cap only; a simple series-parallel graph on `v >= 2`
    /// vertices has at most `2v - 3` edges.
    pub fn vertices(max_vertices: usize) -> Self {
        Self::new(max_vertices, (2 * max_vertices).saturating_sub(3).max(1))
    }

    /// Edge cap only.
    pub fn edges(max_edges: usize) -> Self {
        Self::new(max_edges + 1, max_edges)
    }

    pub fn admits(&self, vertices: usize, edges: usize) -> bool {
        vertices <= self.max_vertices && edges <= self.max_edges
    }
}

/// How colourability is decided when pruning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColourCheck {
    /// Fold the forced-set algebra over the tree.
    Fold,
    /// Run the colouring search on the realised graph.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prune {
    /// Every 2-terminal series-parallel graph within the bound.
    None,
    /// Only colourable classes are kept and used as parts. Compositions of
    /// kept classes that turn out uncolourable are collected separately;
    /// these are exactly the graphs all of whose proper sub-expressions are
    /// colourable.
    Colourable { order: CycleOrder, check: ColourCheck },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Edge,
    Serial,
    Parallel,
}

// Oriented class reference: `id << 1 | flipped`. Symmetric classes are only
// ever referenced unflipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct ORef(u32);

impl ORef {
    fn new(id: u32, flipped: bool) -> Self {
        ORef(id << 1 | u32::from(flipped))
    }
    fn id(self) -> usize {
        (self.0 >> 1) as usize
    }
    fn flipped(self) -> bool {
        self.0 & 1 == 1
    }
}

struct Class {
    kind: Kind,
    children: Vec<ORef>,
    vertices: u16,
    edges: u16,
    keys: [Vec<u8>; 2],
    forced: Option<SymSet>,
    // Least oriented child in each orientation (parallel classes only).
    min_child: [ORef; 2],
}

/// One generated class, in its canonical orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    pub expr: SpExpr,
    pub key: CanonKey,
    pub vertices: usize,
    pub edges: usize,
    /// Present when the enumeration pruned by colourability with the fold.
    pub forced: Option<SymSet>,
}

/// Result of an exhaustive run.
pub struct Enumeration {
    bound: Bound,
    prune: Prune,
    classes: Vec<Class>,
    index: BTreeMap<Vec<u8>, u32>,
    uncolourable: Vec<SpExpr>,
    uncolourable_keys: BTreeSet<Vec<u8>>,
}

#[derive(Default)]
struct Buckets {
    non_serial: Vec<ORef>,
    non_parallel: Vec<ORef>,
    serial: Vec<ORef>,
    parallel: Vec<ORef>,
}

impl Enumeration {
    pub fn run(bound: Bound, prune: Prune) -> Enumeration {
        let mut run = Enumeration {
            bound,
            prune,
            classes: Vec::new(),
            index: BTreeMap::new(),
            uncolourable: Vec::new(),
            uncolourable_keys: BTreeSet::new(),
        };
        if bound.max_edges == 0 || bound.max_vertices < 2 {
            return run;
        }
        let mut strata: Vec<Buckets> = (0..=bound.max_edges).map(|_| Buckets::default()).collect();
        let edge = run.insert(Kind::Edge, Vec::new(), 2, 1).expect("K2 is colourable");
        run.file(edge, &mut strata[1]);

        for m in 2..=bound.max_edges {
            let mut fresh = Vec::new();
            for m1 in 1..m {
                let m2 = m - m1;
                run.serial_stratum(&strata[m1], &strata[m2], m, &mut fresh);
                run.parallel_stratum(&strata[m1], &strata[m2], m, &mut fresh);
            }
            for id in fresh {
                run.file(id, &mut strata[m]);
            }
        }
        run
    }

    fn serial_stratum(&mut self, heads: &Buckets, tails: &Buckets, m: usize, fresh: &mut Vec<u32>) {
        for &h in &heads.non_serial {
            let hv = usize::from(self.classes[h.id()].vertices);
            for &t in tails.non_serial.iter().chain(&tails.serial) {
                let v = hv + usize::from(self.classes[t.id()].vertices) - 1;
                if v > self.bound.max_vertices {
                    continue;
                }
                let mut children = vec![h];
                if self.classes[t.id()].kind == Kind::Serial {
                    children.extend(self.oriented_children(t));
                } else {
                    children.push(t);
                }
                if let Some(id) = self.insert(Kind::Serial, children, v, m) {
                    fresh.push(id);
                }
            }
        }
    }

    fn parallel_stratum(
        &mut self,
        heads: &Buckets,
        tails: &Buckets,
        m: usize,
        fresh: &mut Vec<u32>,
    ) {
        for &h in &heads.non_parallel {
            let hc = &self.classes[h.id()];
            let (hv, h_edge) = (usize::from(hc.vertices), hc.kind == Kind::Edge);
            for &t in tails.non_parallel.iter().chain(&tails.parallel) {
                let tc = &self.classes[t.id()];
                let v = hv + usize::from(tc.vertices) - 2;
                if v > self.bound.max_vertices {
                    continue;
                }
                let least = if tc.kind == Kind::Parallel {
                    tc.min_child[usize::from(t.flipped())]
                } else {
                    t
                };
                if h > least {
                    continue;
                }
                let mut children = vec![h];
                if tc.kind == Kind::Parallel {
                    children.extend(self.oriented_children(t));
                } else {
                    children.push(t);
                }
                if h_edge && children[1..].iter().any(|c| self.classes[c.id()].kind == Kind::Edge) {
                    continue;
                }
                if let Some(id) = self.insert(Kind::Parallel, children, v, m) {
                    fresh.push(id);
                }
            }
        }
    }

    fn file(&self, id: u32, b: &mut Buckets) {
        let c = &self.classes[id as usize];
        let mut orients = vec![ORef::new(id, false)];
        if c.keys[0] != c.keys[1] {
            orients.push(ORef::new(id, true));
        }
        for r in orients {
            match c.kind {
                Kind::Edge => {
                    b.non_serial.push(r);
                    b.non_parallel.push(r);
                }
                Kind::Serial => {
                    b.non_parallel.push(r);
                    b.serial.push(r);
                }
                Kind::Parallel => {
                    b.non_serial.push(r);
                    b.parallel.push(r);
                }
            }
        }
    }

    fn flip(&self, r: ORef) -> ORef {
        let c = &self.classes[r.id()];
        if c.keys[0] == c.keys[1] {
            r
        } else {
            ORef(r.0 ^ 1)
        }
    }

    fn key(&self, r: ORef) -> &[u8] {
        &self.classes[r.id()].keys[usize::from(r.flipped())]
    }

    fn oriented_children(&self, r: ORef) -> Vec<ORef> {
        let c = &self.classes[r.id()];
        if !r.flipped() {
            return c.children.clone();
        }
        let flipped = c.children.iter().map(|&x| self.flip(x));
        match c.kind {
            Kind::Serial => flipped.rev().collect(),
            _ => flipped.collect(),
        }
    }

    fn compose_key(&self, kind: Kind, children: &[ORef], reversed: bool) -> Vec<u8> {
        let mut parts: Vec<&[u8]> = Vec::with_capacity(children.len());
        match (kind, reversed) {
            (Kind::Serial, false) => parts.extend(children.iter().map(|&c| self.key(c))),
            (Kind::Serial, true) => {
                parts.extend(children.iter().rev().map(|&c| self.key(self.flip(c))))
            }
            (_, false) => {
                parts.extend(children.iter().map(|&c| self.key(c)));
                parts.sort_unstable();
            }
            (_, true) => {
                parts.extend(children.iter().map(|&c| self.key(self.flip(c))));
                parts.sort_unstable();
            }
        }
        let len = parts.iter().map(|p| p.len()).sum::<usize>() + 2;
        let mut out = Vec::with_capacity(len);
        out.push(if kind == Kind::Serial { b'S' } else { b'P' });
        for p in parts {
            out.extend_from_slice(p);
        }
        out.push(b')');
        out
    }

    // Registers a candidate; returns its id when it is a new kept class.
    fn insert(&mut self, kind: Kind, children: Vec<ORef>, vertices: usize, edges: usize) -> Option<u32> {
        let (fwd, rev) = if kind == Kind::Edge {
            (vec![b'e'], vec![b'e'])
        } else {
            (
                self.compose_key(kind, &children, false),
                self.compose_key(kind, &children, true),
            )
        };
        let canonical = if fwd <= rev { &fwd } else { &rev };
        if self.index.contains_key(canonical) || self.uncolourable_keys.contains(canonical) {
            return None;
        }

        let forced = match self.prune {
            Prune::None => None,
            Prune::Colourable { order, check } => {
                let colourable = match check {
                    ColourCheck::Fold => {
                        let f = self.fold(kind, &children, order);
                        if f.is_empty() {
                            None
                        } else {
                            Some(Some(f))
                        }
                    }
                    ColourCheck::Oracle => {
                        let g = self.expr_from(kind, &children).realize().expect("simple by construction");
                        Oracle::new(order)
                            .allow_large()
                            .has_hom(&g.graph)
                            .expect("guard lifted")
                            .map(|_| None)
                    }
                };
                match colourable {
                    Some(f) => f,
                    None => {
                        let canonical = canonical.clone();
                        self.uncolourable.push(self.expr_from(kind, &children));
                        self.uncolourable_keys.insert(canonical);
                        return None;
                    }
                }
            }
        };

        let (children, keys) = if fwd <= rev {
            (children, [fwd, rev])
        } else {
            let flipped: Vec<ORef> = children.iter().map(|&c| self.flip(c)).collect();
            let children = if kind == Kind::Serial {
                flipped.into_iter().rev().collect()
            } else {
                flipped
            };
            (children, [rev, fwd])
        };
        let id = self.classes.len() as u32;
        let mut min_child = [ORef::new(id, false); 2];
        if kind == Kind::Parallel {
            min_child[0] = *children.iter().min().expect("parallel class has parts");
            min_child[1] = children
                .iter()
                .map(|&c| self.flip(c))
                .min()
                .expect("parallel class has parts");
        }
        self.index.insert(keys[0].clone(), id);
        self.classes.push(Class {
            kind,
            children,
            vertices: vertices as u16,
            edges: edges as u16,
            keys,
            forced,
            min_child,
        });
        Some(id)
    }

    fn fold(&self, kind: Kind, children: &[ORef], order: CycleOrder) -> SymSet {
        let forced = |c: &ORef| self.classes[c.id()].forced.expect("kept classes carry forced sets");
        match kind {
            Kind::Edge => SymSet::orbit(order, 1),
            Kind::Serial => children
                .iter()
                .fold(SymSet::orbit(order, 0), |acc, c| acc.sum(forced(c))),
            Kind::Parallel => children
                .iter()
                .fold(SymSet::full(order), |acc, c| acc.meet(forced(c))),
        }
    }

    fn expr_from(&self, kind: Kind, children: &[ORef]) -> SpExpr {
        let parts = children.iter().map(|&c| self.expr(c)).collect();
        match kind {
            Kind::Edge => SpExpr::Edge,
            Kind::Serial => SpExpr::Serial(parts),
            Kind::Parallel => SpExpr::Parallel(parts),
        }
    }

    fn expr(&self, r: ORef) -> SpExpr {
        let c = &self.classes[r.id()];
        self.expr_from(c.kind, &self.oriented_children(r))
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    /// Number of kept classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Kept classes in generation order (by edge count, then discovery).
    pub fn classes(&self) -> impl Iterator<Item = ClassInfo> + '_ {
        (0..self.classes.len()).map(move |id| {
            let c = &self.classes[id];
            ClassInfo {
                expr: self.expr(ORef::new(id as u32, false)),
                key: CanonKey(c.keys[0].clone()),
                vertices: usize::from(c.vertices),
                edges: usize::from(c.edges),
                forced: c.forced,
            }
        })
    }

    pub fn exprs(&self) -> impl Iterator<Item = SpExpr> + '_ {
        (0..self.classes.len()).map(move |id| self.expr(ORef::new(id as u32, false)))
    }

    /// Uncolourable compositions of kept classes (pruned runs only).
    pub fn uncolourable(&self) -> &[SpExpr] {
        &self.uncolourable
    }

    pub fn contains(&self, key: &CanonKey) -> bool {
        self.index.contains_key(&key.0)
    }
}

/// Every 2-terminal series-parallel graph with at most `max_edges` edges,
/// one expression per canonical key.
pub fn enumerate_expressions(max_edges: usize) -> Vec<SpExpr> {
    Enumeration::run(Bound::edges(max_edges), Prune::None).exprs().collect()
}
