//! Families of minimally forcing 2-terminal series-parallel graphs.
//!
//! A [`FamilyTag`] `(S, T)` names the graphs that are minimally `S`-forcing
//! and whose every single-edge deletion newly forces an element of `T`; with
//! `T` the complement of `S` this is just minimal `S`-forcing.
//!
//! Families are produced two ways. The closure builders start from `K2` and
//! apply composition rules stratum by stratum in the edge count, never
//! looking at a colouring. The oracle builders scan every series-parallel
//! graph within the bound and test membership directly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::enumerate::{Bound, ColourCheck, Enumeration, Prune};
use crate::error::{Error, Result};
use crate::hom::{forced_sets_with_deletions, minimal_from_parts, Oracle};
use crate::ring::{enumerate_symmetric_subsets, CycleOrder, SymSet};
use crate::sp::{recognize_sp, CanonKey, SpExpr};
use crate::graph::{Graph, LabeledGraph};

/// `(S, T)`: forced set `S`, refinement target `T`, disjoint and nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyTag {
    pub set: SymSet,
    pub target: SymSet,
}

impl FamilyTag {
    pub fn new(set: SymSet, target: SymSet) -> Result<Self> {
        if set.order() != target.order() {
            return Err(Error::OrderMismatch {
                left: set.order().n(),
                right: target.order().n(),
            });
        }
        if set.is_empty() || target.is_empty() {
            return Err(Error::InvalidTag(format!("empty side in ({set}, {target})")));
        }
        if !set.is_disjoint(target) {
            return Err(Error::InvalidTag(format!("({set}, {target}) overlap")));
        }
        Ok(Self { set, target })
    }

    /// The unrefined family of `S`: target is the complement.
    pub fn plain(set: SymSet) -> Result<Self> {
        Self::new(set, set.complement())
    }

    pub fn is_plain(&self) -> bool {
        self.target == self.set.complement()
    }

    pub fn order(&self) -> CycleOrder {
        self.set.order()
    }

    /// Every valid tag over `Z_n`, ascending.
    pub fn all(order: CycleOrder) -> Vec<FamilyTag> {
        let sets = enumerate_symmetric_subsets(order, true);
        let mut out = Vec::new();
        for &s in &sets {
            for &t in enumerate_symmetric_subsets(order, false).iter() {
                if let Ok(tag) = FamilyTag::new(s, t) {
                    out.push(tag);
                }
            }
        }
        out.sort();
        out
    }

    /// The plain tags, one per nonempty proper symmetric set.
    pub fn all_plain(order: CycleOrder) -> Vec<FamilyTag> {
        enumerate_symmetric_subsets(order, true)
            .into_iter()
            .map(|s| FamilyTag::plain(s).expect("proper nonempty set"))
            .collect()
    }

    /// `S` or `S,T` in set syntax or orbit aliases.
    pub fn parse(order: CycleOrder, text: &str) -> Result<Self> {
        match text.split_once(',') {
            // A brace set also contains commas; only split outside braces.
            Some(_) if text.trim_start().starts_with('{') => {
                let close = text
                    .find('}')
                    .ok_or_else(|| Error::SetSyntax(format!("unclosed brace in {text:?}")))?;
                let (s, rest) = text.split_at(close + 1);
                let s = SymSet::parse(order, s)?;
                match rest.trim().strip_prefix(',') {
                    Some(t) => FamilyTag::new(s, SymSet::parse(order, t)?),
                    None if rest.trim().is_empty() => FamilyTag::plain(s),
                    None => Err(Error::SetSyntax(format!("unexpected {rest:?}"))),
                }
            }
            Some((s, t)) => FamilyTag::new(SymSet::parse(order, s)?, SymSet::parse(order, t)?),
            None => FamilyTag::plain(SymSet::parse(order, text)?),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.set.short_name(), self.target.short_name())
    }
}

/// Members of a set of families, deduplicated by canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCatalog {
    pub order: CycleOrder,
    pub bound: Bound,
    pub families: BTreeMap<FamilyTag, BTreeMap<CanonKey, SpExpr>>,
}

impl FamilyCatalog {
    pub fn family(&self, tag: &FamilyTag) -> Option<&BTreeMap<CanonKey, SpExpr>> {
        self.families.get(tag)
    }

    pub fn keys(&self, tag: &FamilyTag) -> BTreeSet<CanonKey> {
        self.families
            .get(tag)
            .map(|f| f.keys().cloned().collect())
            .unwrap_or_default()
    }

    /// Members of every family, each once.
    pub fn union(&self) -> BTreeMap<CanonKey, SpExpr> {
        let mut out = BTreeMap::new();
        for fam in self.families.values() {
            for (k, e) in fam {
                out.entry(k.clone()).or_insert_with(|| e.clone());
            }
        }
        out
    }

    /// `(tag, key, expr)` triples in tag then key order.
    pub fn entries(&self) -> impl Iterator<Item = (&FamilyTag, &CanonKey, &SpExpr)> {
        self.families
            .iter()
            .flat_map(|(t, f)| f.iter().map(move |(k, e)| (t, k, e)))
    }

    /// Restricts to the listed tags.
    pub fn only(&self, tags: &[FamilyTag]) -> FamilyCatalog {
        FamilyCatalog {
            order: self.order,
            bound: self.bound,
            families: tags
                .iter()
                .map(|t| (*t, self.families.get(t).cloned().unwrap_or_default()))
                .collect(),
        }
    }
}

/// For each edge in realisation order, the least element newly forced
/// inside the tag's target when that edge is deleted.
pub fn new_element_witnesses(e: &SpExpr, tag: &FamilyTag) -> Vec<Option<u32>> {
    let (_, deleted) = forced_sets_with_deletions(e, tag.order());
    deleted
        .into_iter()
        .map(|d| d.meet(tag.target).meet(tag.set.complement()).min_element())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Serial,
    Parallel,
}

#[derive(Debug, Clone, Copy)]
struct Rule {
    op: Op,
    left: FamilyTag,
    right: FamilyTag,
    out: FamilyTag,
}

struct Node {
    forms: [SpExpr; 2],
    vertices: usize,
}

#[derive(Default)]
struct Family {
    by_edges: Vec<Vec<usize>>,
    members: BTreeSet<usize>,
}

// Stratified least fixed point of a rule system seeded with K2.
struct Closure {
    bound: Bound,
    nodes: Vec<Node>,
    index: BTreeMap<CanonKey, usize>,
    families: BTreeMap<FamilyTag, Family>,
}

impl Closure {
    fn run(order: CycleOrder, bound: Bound, tags: &[FamilyTag], seeds: &[FamilyTag], rules: &[Rule]) -> FamilyCatalog {
        let mut c = Closure {
            bound,
            nodes: Vec::new(),
            index: BTreeMap::new(),
            families: tags.iter().map(|t| (*t, Family::default())).collect(),
        };
        for fam in c.families.values_mut() {
            fam.by_edges = vec![Vec::new(); bound.max_edges + 1];
        }
        if bound.admits(2, 1) {
            let k2 = c.intern(SpExpr::Edge, 2);
            for tag in seeds {
                c.admit(*tag, k2, 1);
            }
        }
        for m in 2..=bound.max_edges {
            let mut found: Vec<(FamilyTag, usize)> = Vec::new();
            for rule in rules {
                for m1 in 1..m {
                    let m2 = m - m1;
                    let (Some(l), Some(r)) = (c.families.get(&rule.left), c.families.get(&rule.right)) else {
                        continue;
                    };
                    let pairs: Vec<(usize, usize)> = l.by_edges[m1]
                        .iter()
                        .flat_map(|&a| r.by_edges[m2].iter().map(move |&b| (a, b)))
                        .collect();
                    for (a, b) in pairs {
                        for (expr, v) in c.compose(rule.op, a, b) {
                            let id = c.intern(expr, v);
                            found.push((rule.out, id));
                        }
                    }
                }
            }
            for (tag, id) in found {
                c.admit(tag, id, m);
            }
        }
        let families = c
            .families
            .iter()
            .map(|(tag, fam)| {
                let members = fam
                    .members
                    .iter()
                    .map(|&id| {
                        let e = &c.nodes[id].forms[0];
                        (e.canonical_key(), e.clone())
                    })
                    .collect();
                (*tag, members)
            })
            .collect();
        FamilyCatalog {
            order,
            bound,
            families,
        }
    }

    fn intern(&mut self, e: SpExpr, vertices: usize) -> usize {
        let key = e.canonical_key();
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len();
        let rev = e.reversed();
        self.nodes.push(Node {
            forms: [e, rev],
            vertices,
        });
        self.index.insert(key, id);
        id
    }

    fn admit(&mut self, tag: FamilyTag, id: usize, edges: usize) {
        if let Some(fam) = self.families.get_mut(&tag) {
            if fam.members.insert(id) {
                fam.by_edges[edges].push(id);
            }
        }
    }

    // Every relative orientation of the two parts; families are closed
    // under swapping terminals.
    fn compose(&self, op: Op, a: usize, b: usize) -> Vec<(SpExpr, usize)> {
        let (na, nb) = (&self.nodes[a], &self.nodes[b]);
        let mut out = Vec::new();
        match op {
            Op::Serial => {
                let v = na.vertices + nb.vertices - 1;
                if v > self.bound.max_vertices {
                    return out;
                }
                for fa in &na.forms {
                    for fb in &nb.forms {
                        out.push((SpExpr::serial_sum(fa.clone(), fb.clone()), v));
                    }
                }
            }
            Op::Parallel => {
                let v = na.vertices + nb.vertices - 2;
                if v > self.bound.max_vertices {
                    return out;
                }
                for fb in &nb.forms {
                    if let Ok(e) = SpExpr::parallel_sum(na.forms[0].clone(), fb.clone()) {
                        out.push((e, v));
                    }
                }
            }
        }
        out
    }
}

fn require_k2(order: CycleOrder) -> Result<()> {
    if order.k() != 2 {
        return Err(Error::WrongOrder {
            expected: 2,
            got: order.k(),
        });
    }
    Ok(())
}

/// The six families over `Z_5` generated from `K2 ∈ T_s1` by: parallel sums
/// `T_sb(i) ∥ T_sb(j) ⊆ T_s(l)` for `{i, j, l} = {0, 1, 2}`; serial sums
/// `T_s(i) + T_s(i) ⊆ T_sb(i)` and `T_s(i) + T_sb(i) ⊆ T_sb0` for `i ∈ {1, 2}`;
/// and `T_X + T_s0 ⊆ T_X` for every family.
pub fn build_t_closure(bound: Bound) -> FamilyCatalog {
    let order = CycleOrder::new(2).expect("k = 2 is in range");
    let s = |i| SymSet::orbit(order, i);
    let sb = |i| SymSet::co_orbit(order, i);
    let tag = |x: SymSet| FamilyTag::plain(x).expect("proper nonempty set");
    let mut rules = Vec::new();
    for (i, j, l) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        rules.push(Rule {
            op: Op::Parallel,
            left: tag(sb(i)),
            right: tag(sb(j)),
            out: tag(s(l)),
        });
    }
    for i in [1, 2] {
        rules.push(Rule {
            op: Op::Serial,
            left: tag(s(i)),
            right: tag(s(i)),
            out: tag(sb(i)),
        });
        rules.push(Rule {
            op: Op::Serial,
            left: tag(s(i)),
            right: tag(sb(i)),
            out: tag(sb(0)),
        });
    }
    let tags = FamilyTag::all_plain(order);
    for &x in &tags {
        rules.push(Rule {
            op: Op::Serial,
            left: x,
            right: tag(s(0)),
            out: x,
        });
    }
    Closure::run(order, bound, &tags, &[tag(s(1))], &rules)
}

/// [`build_t_closure`] with an explicit order check.
pub fn build_t_closure_for(order: CycleOrder, bound: Bound) -> Result<FamilyCatalog> {
    require_k2(order)?;
    Ok(build_t_closure(bound))
}

/// All refined families `F_R^Q` over `Z_n` by the composition recursion.
///
/// Seeds: `K2 ∈ F_s1^X` for every nonempty symmetric `X ⊆ sb1`. Rules, for
/// symmetric `S, T`:
/// - if `R = S ∩ T` and both `Q ∩ (T \ S)` and `Q ∩ (S \ T)` are nonempty,
///   `F_S^{Q ∩ (T \ S)} ∥ F_T^{Q ∩ (S \ T)} ⊆ F_R^Q`;
/// - if `R = S + T` and both `Q_T` and `Q_S` are nonempty,
///   `F_S^{Q_T} + F_T^{Q_S} ⊆ F_R^Q`.
pub fn recursive_catalog(order: CycleOrder, bound: Bound) -> FamilyCatalog {
    let tags = FamilyTag::all(order);
    let sets = enumerate_symmetric_subsets(order, true);
    let mut rules = Vec::new();
    for out in &tags {
        let (r, q) = (out.set, out.target);
        for &s in &sets {
            for &t in &sets {
                if s.meet(t) == r {
                    let a = q.meet(t).meet(s.complement());
                    let b = q.meet(s).meet(t.complement());
                    if let (Ok(left), Ok(right)) = (FamilyTag::new(s, a), FamilyTag::new(t, b)) {
                        rules.push(Rule {
                            op: Op::Parallel,
                            left,
                            right,
                            out: *out,
                        });
                    }
                }
                if s.sum(t) == r {
                    let (qt, qs) = (q.hits(t), q.hits(s));
                    if let (Ok(left), Ok(right)) = (FamilyTag::new(s, qt), FamilyTag::new(t, qs)) {
                        rules.push(Rule {
                            op: Op::Serial,
                            left,
                            right,
                            out: *out,
                        });
                    }
                }
            }
        }
    }
    let s1 = SymSet::orbit(order, 1);
    let seeds: Vec<FamilyTag> = tags
        .iter()
        .filter(|t| t.set == s1 && t.target.is_subset(s1.complement()))
        .copied()
        .collect();
    Closure::run(order, bound, &tags, &seeds, &rules)
}

/// One family by the composition recursion.
pub fn build_f_recursive(tag: FamilyTag, bound: Bound) -> BTreeMap<CanonKey, SpExpr> {
    recursive_catalog(tag.order(), bound)
        .families
        .remove(&tag)
        .unwrap_or_default()
}

/// How membership is decided on the scanning side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Colouring searches on the realised graph and its edge deletions.
    Oracle,
    /// The forced-set fold, with deleted edges forcing `Z_n`.
    Fold,
}

/// Scans every series-parallel graph within the bound and files each
/// minimally forcing one into every listed family it belongs to.
pub fn oracle_catalog(order: CycleOrder, bound: Bound, tags: &[FamilyTag], route: Route) -> Result<FamilyCatalog> {
    let check = match route {
        Route::Oracle => ColourCheck::Oracle,
        Route::Fold => ColourCheck::Fold,
    };
    // Minimally forcing graphs with a nonempty forced set are colourable,
    // and so is every sub-expression.
    let run = Enumeration::run(bound, Prune::Colourable { order, check });
    let mut families: BTreeMap<FamilyTag, BTreeMap<CanonKey, SpExpr>> =
        tags.iter().map(|t| (*t, BTreeMap::new())).collect();
    let oracle = Oracle::new(order).allow_large();
    for class in run.classes() {
        let (set, deleted) = match route {
            Route::Fold => forced_sets_with_deletions(&class.expr, order),
            Route::Oracle => {
                let g = class.expr.realize()?;
                let set = oracle.forced_set(&g)?.set;
                if set.is_empty() || set.is_full() {
                    continue;
                }
                let mut deleted = Vec::with_capacity(g.graph.edge_count());
                for d in 0..g.graph.edge_count() {
                    deleted.push(oracle.forced_set(&g.without_edge(d))?.set);
                }
                (set, deleted)
            }
        };
        let Some(s) = minimal_from_parts(set, &deleted) else {
            continue;
        };
        for (tag, fam) in families.iter_mut() {
            if tag.set == s && deleted.iter().all(|d| !d.is_disjoint(tag.target)) {
                fam.insert(class.key.clone(), class.expr.clone());
            }
        }
    }
    Ok(FamilyCatalog {
        order,
        bound,
        families,
    })
}

/// One family by exhaustive scan.
pub fn enumerate_f_oracle(tag: FamilyTag, bound: Bound, route: Route) -> Result<BTreeMap<CanonKey, SpExpr>> {
    Ok(oracle_catalog(tag.order(), bound, &[tag], route)?
        .families
        .remove(&tag)
        .unwrap_or_default())
}

/// A named base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasEntry {
    pub name: String,
    pub expr: SpExpr,
    pub tag: FamilyTag,
}

/// Whether `small` sits inside `big` as a subgraph on the same terminals
/// (either orientation). Brute force over edge subsets.
pub fn contains_between_terminals(big: &SpExpr, small: &SpExpr) -> Result<bool> {
    let g = big.realize()?;
    let want = small.canonical_key();
    let m = g.graph.edge_count();
    let k = small.edge_count();
    if k > m || m > 24 {
        return Ok(false);
    }
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != k {
            continue;
        }
        let edges: Vec<_> = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| g.graph.edges()[i])
            .collect();
        let mut used = vec![false; g.graph.vertex_count()];
        used[g.s] = true;
        used[g.t] = true;
        for &(u, v) in &edges {
            used[u] = true;
            used[v] = true;
        }
        let verts: Vec<usize> = (0..used.len()).filter(|&v| used[v]).collect();
        let mut index = vec![0; used.len()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let sub: Vec<_> = edges.iter().map(|&(u, v)| (index[u], index[v])).collect();
        let lg = LabeledGraph::new(Graph::new(verts.len(), &sub)?, index[g.s], index[g.t])?;
        if let Ok(e) = recognize_sp(&lg) {
            if e.canonical_key() == want {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The members of all six families over `Z_5` with at most ten vertices,
/// named `H1..H6` by vertex count, then canonical key.
///
/// Fails if the closure does not reproduce the known anchors: six graphs;
/// `H1 = K2` forcing `s1`; `H2 = P3` forcing `sb1`; `H3 = P4` forcing `sb0`;
/// `H4` the 5-cycle with terminals at distance two, forcing `s2`; `H5` on
/// nine vertices forcing `sb2` with two 5-cycles through a common vertex;
/// `H6` on ten vertices with an 8-cycle; and `H4 + H1 ⊇ H3` on the same
/// terminals.
pub fn base_atlas() -> Result<Vec<AtlasEntry>> {
    let cat = build_t_closure(Bound::vertices(10));
    let mut members: Vec<(usize, CanonKey, SpExpr, FamilyTag)> = cat
        .entries()
        .map(|(t, k, e)| (e.vertex_count(), k.clone(), e.clone(), *t))
        .collect();
    members.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let fail = |msg: String| Err(Error::Atlas(msg));
    if members.len() != 6 {
        return fail(format!("expected 6 base graphs, found {}", members.len()));
    }
    let atlas: Vec<AtlasEntry> = members
        .into_iter()
        .enumerate()
        .map(|(i, (_, _, expr, tag))| AtlasEntry {
            name: format!("H{}", i + 1),
            expr,
            tag,
        })
        .collect();

    let order = cat.order;
    let s = |i| SymSet::orbit(order, i);
    let sb = |i| SymSet::co_orbit(order, i);
    let c5 = SpExpr::parallel_sum(SpExpr::path(3), SpExpr::path(2))?;
    let anchors = [
        (SpExpr::Edge, s(1)),
        (SpExpr::path(2), sb(1)),
        (SpExpr::path(3), sb(0)),
        (c5, s(2)),
    ];
    for (i, (expr, set)) in anchors.iter().enumerate() {
        let h = &atlas[i];
        if h.expr.canonical_key() != expr.canonical_key() || h.tag.set != *set {
            return fail(format!("{} is {:?} in {}", h.name, h.expr.canonical_key().0, h.tag));
        }
    }
    let h5 = &atlas[4];
    let g5 = h5.expr.realize()?;
    if g5.graph.vertex_count() != 9 || h5.tag.set != sb(2) || !g5.graph.two_c5_sharing_vertex()? {
        return fail(format!("H5 anchor failed ({} vertices, {})", g5.graph.vertex_count(), h5.tag));
    }
    let h6 = &atlas[5];
    let g6 = h6.expr.realize()?;
    if g6.graph.vertex_count() != 10 || !g6.graph.has_cycle_of_length(8)? {
        return fail(format!("H6 anchor failed ({} vertices)", g6.graph.vertex_count()));
    }
    let h4h1 = SpExpr::serial_sum(atlas[3].expr.clone(), atlas[0].expr.clone());
    if !contains_between_terminals(&h4h1, &atlas[2].expr)? {
        return fail("H4 + H1 does not contain H3".into());
    }
    Ok(atlas)
}
