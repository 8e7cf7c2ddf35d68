//! Homomorphisms to odd cycles.
//!
//! Two independent routes to forced sets live here: [`Oracle`] searches for
//! colourings of a concrete graph, while [`forced_set_dp`] folds the set
//! algebra over an expression tree (leaf `s(1)`, serial = Minkowski sum,
//! parallel = intersection).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabeledGraph};
use crate::ring::{CycleOrder, SymSet};
use crate::sp::{recognize_sp, SpExpr};

/// Default ceiling on graph size for oracle searches.
pub const ORACLE_VERTEX_LIMIT: usize = 40;

/// A map `V(G) -> Z_n`; entry `v` is the colour of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring(pub Vec<u32>);

impl Colouring {
    /// Whether every edge maps to an edge of `C_n`.
    pub fn is_valid(&self, g: &Graph, order: CycleOrder) -> bool {
        let n = order.n();
        self.0.len() == g.vertex_count()
            && self.0.iter().all(|&c| c < n)
            && g.edges().iter().all(|&(u, v)| {
                let d = (self.0[u] + n - self.0[v]) % n;
                d == 1 || d == n - 1
            })
    }
}

/// Forced set of a 2-terminal graph with one colouring per member `x`
/// sending `s` to 0 and `t` to `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedSetResult {
    pub set: SymSet,
    pub witnesses: Vec<(u32, Colouring)>,
}

/// A parallel decomposition `left ∥ right` at terminals `(s, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelSplit {
    pub s: usize,
    pub t: usize,
    pub left: SpExpr,
    pub right: SpExpr,
    pub left_set: SymSet,
    pub right_set: SymSet,
}

/// Certificate that a graph is `C_n`-critical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalReport {
    pub order: CycleOrder,
    pub graph: Graph,
    /// `witnesses[i]` colours the graph with edge `i` deleted.
    pub witnesses: Vec<Colouring>,
    pub split: Option<ParallelSplit>,
}

impl CriticalReport {
    /// Re-checks every stored witness.
    pub fn witnesses_valid(&self) -> bool {
        self.witnesses.len() == self.graph.edge_count()
            && self
                .witnesses
                .iter()
                .enumerate()
                .all(|(i, c)| c.is_valid(&self.graph.without_edge(i), self.order))
    }
}

/// Outcome of a criticality test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Criticality {
    Critical(CriticalReport),
    /// The graph itself is colourable.
    Colourable(Colouring),
    /// Deleting this edge still leaves an uncolourable graph.
    NotMinimal { edge: usize },
    /// Deleting this isolated vertex still leaves an uncolourable graph.
    IsolatedVertex { vertex: usize },
}

/// A violation of the cut structure every critical graph must have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutViolation {
    NotTwoConnected,
    Unrestricted { cut: (usize, usize), component: Vec<usize> },
}

/// Exhaustive `C_n`-colouring search with arc-consistency pruning.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    order: CycleOrder,
    limit: Option<usize>,
}

impl Oracle {
    pub fn new(order: CycleOrder) -> Self {
        Self {
            order,
            limit: Some(ORACLE_VERTEX_LIMIT),
        }
    }

    /// Lifts the vertex-count guard.
    pub fn allow_large(mut self) -> Self {
        self.limit = None;
        self
    }

    pub fn order(&self) -> CycleOrder {
        self.order
    }

    fn guard(&self, g: &Graph) -> Result<()> {
        match self.limit {
            Some(limit) if g.vertex_count() > limit => Err(Error::TooLarge {
                vertices: g.vertex_count(),
                limit,
            }),
            _ => Ok(()),
        }
    }

    /// A colouring of `g`, if one exists.
    pub fn has_hom(&self, g: &Graph) -> Result<Option<Colouring>> {
        self.guard(g)?;
        let mut domains = vec![self.order.mask(); g.vertex_count()];
        // C_n is vertex-transitive, so one vertex per component may be fixed.
        for comp in g.components_without(&[]) {
            let root = *comp
                .iter()
                .max_by_key(|&&v| (g.degree(v), core::cmp::Reverse(v)))
                .expect("components are nonempty");
            domains[root] = 1;
        }
        Ok(Search::new(g, self.order).solve(domains))
    }

    /// A colouring with the given vertices pinned to the given colours.
    pub fn has_hom_with(&self, g: &Graph, pinned: &[(usize, u32)]) -> Result<Option<Colouring>> {
        self.guard(g)?;
        let mut domains = vec![self.order.mask(); g.vertex_count()];
        for &(v, c) in pinned {
            if c >= self.order.n() {
                return Err(Error::ResidueOutOfRange {
                    residue: c,
                    modulus: self.order.n(),
                });
            }
            domains[v] &= 1 << c;
        }
        Ok(Search::new(g, self.order).solve(domains))
    }

    /// Forced set by pinning `s` to 0 and trying every colour for `t`.
    pub fn forced_set(&self, g: &LabeledGraph) -> Result<ForcedSetResult> {
        self.guard(&g.graph)?;
        let mut bits = 0u64;
        let mut witnesses = Vec::new();
        for x in 0..self.order.n() {
            if let Some(c) = self.has_hom_with(&g.graph, &[(g.s, 0), (g.t, x)])? {
                bits |= 1 << x;
                witnesses.push((x, c));
            }
        }
        // Asymmetry here would be a solver bug; from_bits rejects it.
        let set = SymSet::from_bits(self.order, bits)?;
        Ok(ForcedSetResult { set, witnesses })
    }

    pub fn is_restricted(&self, g: &LabeledGraph) -> Result<bool> {
        Ok(!self.forced_set(g)?.set.is_full())
    }

    /// Minimal forcing by edge deletion; `None` when the forced set is
    /// empty, all of `Z_n`, or some deletion keeps it unchanged.
    pub fn minimally_forcing(&self, g: &LabeledGraph) -> Result<Option<SymSet>> {
        let set = self.forced_set(g)?.set;
        if set.is_empty() || set.is_full() {
            return Ok(None);
        }
        for d in 0..g.graph.edge_count() {
            if self.forced_set(&g.without_edge(d))?.set == set {
                return Ok(None);
            }
        }
        Ok(Some(set))
    }

    /// Membership in `F_S^T`, decided by colouring searches alone.
    pub fn refined_membership(&self, g: &LabeledGraph, s: SymSet, t: SymSet) -> Result<bool> {
        check_tag(s, t)?;
        if self.minimally_forcing(g)? != Some(s) {
            return Ok(false);
        }
        for d in 0..g.graph.edge_count() {
            let after = self.forced_set(&g.without_edge(d))?.set;
            if after.is_disjoint(t) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Criticality: uncolourable, and colourable after deleting any edge.
    /// Deleting a non-isolated vertex removes an edge, so only isolated
    /// vertices need their own test.
    pub fn criticality(&self, g: &Graph) -> Result<Criticality> {
        if let Some(c) = self.has_hom(g)? {
            return Ok(Criticality::Colourable(c));
        }
        if let Some(vertex) = (0..g.vertex_count()).find(|&v| g.degree(v) == 0) {
            return Ok(Criticality::IsolatedVertex { vertex });
        }
        let mut witnesses = Vec::with_capacity(g.edge_count());
        for d in 0..g.edge_count() {
            match self.has_hom(&g.without_edge(d))? {
                Some(c) => witnesses.push(c),
                None => return Ok(Criticality::NotMinimal { edge: d }),
            }
        }
        Ok(Criticality::Critical(CriticalReport {
            order: self.order,
            graph: g.clone(),
            witnesses,
            split: None,
        }))
    }

    pub fn is_critical(&self, g: &Graph) -> Result<Option<CriticalReport>> {
        Ok(match self.criticality(g)? {
            Criticality::Critical(r) => Some(r),
            _ => None,
        })
    }

    /// Checks 2-connectivity and that every piece hanging off a 2-cut is a
    /// restricted 2-terminal graph. Returns the violations found.
    pub fn cut_structure_violations(&self, g: &Graph) -> Result<Vec<CutViolation>> {
        let mut out = Vec::new();
        if !g.is_two_connected() {
            out.push(CutViolation::NotTwoConnected);
            return Ok(out);
        }
        let n = g.vertex_count();
        for u in 0..n {
            for v in u + 1..n {
                let comps = g.components_without(&[u, v]);
                if comps.len() < 2 {
                    continue;
                }
                for comp in comps {
                    let mut verts = vec![u, v];
                    verts.extend(&comp);
                    let piece = LabeledGraph::new(g.induced(&verts), 0, 1)?;
                    if !self.is_restricted(&piece)? {
                        out.push(CutViolation::Unrestricted {
                            cut: (u, v),
                            component: comp,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn cut_structure_check(&self, g: &Graph) -> Result<bool> {
        Ok(self.cut_structure_violations(g)?.is_empty())
    }
}

struct Search<'a> {
    g: &'a Graph,
    order: CycleOrder,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, order: CycleOrder) -> Self {
        Self { g, order }
    }

    fn solve(&self, mut domains: Vec<u64>) -> Option<Colouring> {
        let all: Vec<usize> = (0..self.g.vertex_count()).collect();
        if !self.propagate(&mut domains, all) {
            return None;
        }
        self.branch(&mut domains)
    }

    // AC-3 over the edge constraints; false on a wipe-out.
    fn propagate(&self, domains: &mut [u64], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; domains.len()];
        for &v in &queue {
            queued[v] = true;
        }
        while let Some(v) = queue.pop() {
            queued[v] = false;
            if domains[v] == 0 {
                return false;
            }
            let support = self.order.neighbours(domains[v]);
            for &w in self.g.neighbours(v) {
                let narrowed = domains[w] & support;
                if narrowed != domains[w] {
                    if narrowed == 0 {
                        return false;
                    }
                    domains[w] = narrowed;
                    if !queued[w] {
                        queued[w] = true;
                        queue.push(w);
                    }
                }
            }
        }
        true
    }

    fn branch(&self, domains: &mut Vec<u64>) -> Option<Colouring> {
        // Smallest open domain first; ties to higher degree, then lower id.
        let pick = (0..domains.len())
            .filter(|&v| domains[v].count_ones() > 1)
            .min_by_key(|&v| {
                (
                    domains[v].count_ones(),
                    core::cmp::Reverse(self.g.degree(v)),
                    v,
                )
            });
        let Some(v) = pick else {
            return Some(Colouring(domains.iter().map(|d| d.trailing_zeros()).collect()));
        };
        let mut rest = domains[v];
        while rest != 0 {
            let c = rest.trailing_zeros();
            rest &= rest - 1;
            let mut trial = domains.clone();
            trial[v] = 1 << c;
            if self.propagate(&mut trial, vec![v]) {
                if let Some(found) = self.branch(&mut trial) {
                    return Some(found);
                }
            }
        }
        None
    }
}

fn check_tag(s: SymSet, t: SymSet) -> Result<()> {
    if s.order() != t.order() {
        return Err(Error::OrderMismatch {
            left: s.order().n(),
            right: t.order().n(),
        });
    }
    if s.is_empty() || t.is_empty() {
        return Err(Error::InvalidTag("S and T must be nonempty".into()));
    }
    if !s.is_disjoint(t) {
        return Err(Error::InvalidTag("S and T must be disjoint".into()));
    }
    Ok(())
}

/// Forced set by folding the expression tree.
pub fn forced_set_dp(e: &SpExpr, order: CycleOrder) -> SymSet {
    match e {
        SpExpr::Edge => SymSet::orbit(order, 1),
        SpExpr::Serial(cs) => cs
            .iter()
            .fold(SymSet::orbit(order, 0), |acc, c| acc.sum(forced_set_dp(c, order))),
        SpExpr::Parallel(cs) => cs
            .iter()
            .fold(SymSet::full(order), |acc, c| acc.meet(forced_set_dp(c, order))),
    }
}

/// Forced set of the whole expression and, for each edge `i` in realisation
/// order, the forced set with that edge deleted. A deleted leaf leaves two
/// unconstrained terminals, i.e. forces `Z_n`.
pub fn forced_sets_with_deletions(e: &SpExpr, order: CycleOrder) -> (SymSet, Vec<SymSet>) {
    match e {
        SpExpr::Edge => (SymSet::orbit(order, 1), vec![SymSet::full(order)]),
        SpExpr::Serial(cs) | SpExpr::Parallel(cs) => {
            let serial = e.is_serial();
            let (unit, op): (SymSet, fn(SymSet, SymSet) -> SymSet) = if serial {
                (SymSet::orbit(order, 0), SymSet::sum)
            } else {
                (SymSet::full(order), SymSet::meet)
            };
            let parts: Vec<_> = cs.iter().map(|c| forced_sets_with_deletions(c, order)).collect();
            // suffix[i] combines parts i.. ; prefix runs alongside.
            let mut suffix = vec![unit; parts.len() + 1];
            for i in (0..parts.len()).rev() {
                suffix[i] = op(parts[i].0, suffix[i + 1]);
            }
            let mut prefix = unit;
            let mut deleted = Vec::new();
            for (i, (own, dels)) in parts.iter().enumerate() {
                for &d in dels {
                    deleted.push(op(op(prefix, d), suffix[i + 1]));
                }
                prefix = op(prefix, *own);
            }
            (suffix[0], deleted)
        }
    }
}

pub fn is_restricted_dp(e: &SpExpr, order: CycleOrder) -> bool {
    !forced_set_dp(e, order).is_full()
}

/// The forced set `S` when `e` is minimally `S`-forcing with `S` neither
/// empty nor `Z_n`.
pub fn is_minimally_forcing(e: &SpExpr, order: CycleOrder) -> Option<SymSet> {
    let (set, deleted) = forced_sets_with_deletions(e, order);
    minimal_from_parts(set, &deleted)
}

pub(crate) fn minimal_from_parts(set: SymSet, deleted: &[SymSet]) -> Option<SymSet> {
    if set.is_empty() || set.is_full() {
        return None;
    }
    // Deletion never shrinks a forced set, so inequality means strict growth.
    deleted.iter().all(|&d| d != set).then_some(set)
}

/// Membership of `e` in `F_S^T`: minimally `S`-forcing, and every single
/// edge deletion newly forces some element of `T`.
pub fn refined_membership(e: &SpExpr, s: SymSet, t: SymSet, order: CycleOrder) -> Result<bool> {
    check_tag(s, t)?;
    if s.order() != order {
        return Err(Error::WrongOrder {
            expected: order.k(),
            got: s.order().k(),
        });
    }
    let (set, deleted) = forced_sets_with_deletions(e, order);
    Ok(minimal_from_parts(set, &deleted) == Some(s) && deleted.iter().all(|d| !d.is_disjoint(t)))
}

/// Forced set of a graph: the expression fold when the graph is
/// series-parallel with these terminals, the oracle otherwise.
pub fn forced_set_auto(oracle: &Oracle, g: &LabeledGraph) -> Result<(SymSet, bool)> {
    match recognize_sp(g) {
        Ok(e) => Ok((forced_set_dp(&e, oracle.order()), true)),
        Err(Error::NotSeriesParallel) => Ok((oracle.forced_set(g)?.set, false)),
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(k: u32) -> CycleOrder {
        CycleOrder::new(k).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn k3() -> SpExpr {
        SpExpr::parallel_sum(SpExpr::Edge, SpExpr::path(2)).unwrap()
    }

    #[test]
    fn colourings_of_cycles() {
        let oracle = Oracle::new(o(2));
        let c = oracle.has_hom(&cycle(5)).unwrap().unwrap();
        assert!(c.is_valid(&cycle(5), o(2)));
        assert!(oracle.has_hom(&cycle(3)).unwrap().is_none());
        assert!(oracle.has_hom(&cycle(7)).unwrap().is_some());
        assert!(oracle.has_hom(&cycle(9)).unwrap().is_some());
        assert!(Oracle::new(o(3)).has_hom(&cycle(5)).unwrap().is_none());
    }

    #[test]
    fn oracle_forced_sets() {
        let oracle = Oracle::new(o(2));
        let k2 = SpExpr::Edge.realize().unwrap();
        assert_eq!(oracle.forced_set(&k2).unwrap().set, SymSet::orbit(o(2), 1));
        let p3 = SpExpr::path(2).realize().unwrap();
        let r = oracle.forced_set(&p3).unwrap();
        assert_eq!(r.set, SymSet::co_orbit(o(2), 1));
        for (x, c) in &r.witnesses {
            assert!(c.is_valid(&p3.graph, o(2)));
            assert_eq!((c.0[p3.s], c.0[p3.t]), (0, *x));
        }
        let apart = LabeledGraph::new(Graph::new(2, &[]).unwrap(), 0, 1).unwrap();
        assert!(oracle.forced_set(&apart).unwrap().set.is_full());
        assert!(!oracle.is_restricted(&apart).unwrap());
        assert!(oracle.is_restricted(&k2).unwrap());
    }

    #[test]
    fn dp_examples() {
        let k = o(2);
        assert!(forced_set_dp(&k3(), k).is_empty());
        let c5 = SpExpr::parallel_sum(SpExpr::path(3), SpExpr::path(2)).unwrap();
        assert_eq!(forced_set_dp(&c5, k), SymSet::orbit(k, 2));
        let p4_p3 = SpExpr::serial_sum(SpExpr::path(3), SpExpr::path(2));
        assert!(forced_set_dp(&p4_p3, k).is_full());
        assert!(is_restricted_dp(&SpExpr::path(3), k));
        assert_eq!(forced_set_dp(&SpExpr::path(3), k), SymSet::co_orbit(k, 0));
    }

    #[test]
    fn deletion_sets_follow_edge_order() {
        let k = o(2);
        let e = SpExpr::serial_sum(k3(), SpExpr::Edge);
        let (set, dels) = forced_sets_with_deletions(&e, k);
        let g = e.realize().unwrap();
        let oracle = Oracle::new(k);
        assert_eq!(set, oracle.forced_set(&g).unwrap().set);
        for (i, d) in dels.iter().enumerate() {
            assert_eq!(*d, oracle.forced_set(&g.without_edge(i)).unwrap().set, "edge {i}");
        }
    }

    #[test]
    fn minimal_forcing() {
        let k = o(2);
        assert_eq!(is_minimally_forcing(&SpExpr::Edge, k), Some(SymSet::orbit(k, 1)));
        assert_eq!(is_minimally_forcing(&k3(), k), None);
        // A chord turning one end of P4 into a triangle: uncolourable.
        let chorded = SpExpr::serial_sum(k3(), SpExpr::path(2));
        assert_eq!(is_minimally_forcing(&chorded, k), None);
        let oracle = Oracle::new(k);
        assert_eq!(oracle.minimally_forcing(&chorded.realize().unwrap()).unwrap(), None);
        // P3 in parallel with P5 forces sb1 but deleting the long side keeps it.
        let padded = SpExpr::parallel_sum(SpExpr::path(2), SpExpr::path(5)).unwrap();
        assert_eq!(forced_set_dp(&padded, k), SymSet::co_orbit(k, 1));
        assert_eq!(is_minimally_forcing(&padded, k), None);
    }

    #[test]
    fn refined_membership_examples() {
        let k = o(2);
        let s1 = SymSet::orbit(k, 1);
        assert!(refined_membership(&SpExpr::Edge, s1, SymSet::co_orbit(k, 1), k).unwrap());
        assert!(refined_membership(&SpExpr::Edge, s1, SymSet::orbit(k, 0), k).unwrap());
        assert!(refined_membership(&SpExpr::Edge, s1, s1, k).is_err());
        let p3 = SpExpr::path(2);
        assert!(refined_membership(&p3, SymSet::co_orbit(k, 1), s1, k).unwrap());
        let oracle = Oracle::new(k);
        assert!(oracle
            .refined_membership(&p3.realize().unwrap(), SymSet::co_orbit(k, 1), s1)
            .unwrap());
    }

    #[test]
    fn criticality_examples() {
        let oracle = Oracle::new(o(2));
        let r = oracle.is_critical(&cycle(3)).unwrap().unwrap();
        assert!(r.witnesses_valid());
        assert!(matches!(oracle.criticality(&cycle(5)).unwrap(), Criticality::Colourable(_)));
        assert!(oracle.is_critical(&cycle(9)).unwrap().is_none());
        // Triangle plus pendant edge: uncolourable but not minimal.
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(
            oracle.criticality(&g).unwrap(),
            Criticality::NotMinimal { edge: 3 }
        );
        let padded = Graph::new(4, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            oracle.criticality(&padded).unwrap(),
            Criticality::IsolatedVertex { vertex: 3 }
        );
        assert!(Oracle::new(o(3)).is_critical(&cycle(3)).unwrap().is_some());
        assert!(Oracle::new(o(3)).is_critical(&cycle(5)).unwrap().is_some());
    }

    #[test]
    fn cut_structure() {
        let oracle = Oracle::new(o(2));
        assert!(oracle.cut_structure_check(&cycle(3)).unwrap());
        let bowtie = Graph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(
            oracle.cut_structure_violations(&bowtie).unwrap(),
            vec![CutViolation::NotTwoConnected]
        );
        // Every 2-cut of C5 leaves paths of length 2 and 3, both restricted.
        assert!(oracle.cut_structure_check(&cycle(5)).unwrap());
        // C6 with cut {0,2}: the long side is a path of length 4.
        assert!(!oracle.cut_structure_check(&cycle(6)).unwrap());
        // C8 with cut {0,4}: paths of length 4 are unrestricted.
        assert!(!oracle.cut_structure_check(&cycle(8)).unwrap());
    }

    #[test]
    fn size_guard() {
        let oracle = Oracle::new(o(2));
        let big = cycle(41);
        assert!(matches!(oracle.has_hom(&big), Err(Error::TooLarge { .. })));
        assert!(oracle.allow_large().has_hom(&big).unwrap().is_some());
    }
}
