//! `C_n`-critical series-parallel graphs.
//!
//! [`generate_critical`] builds them as parallel sums of refined families
//! over disjoint forced sets; [`filter_critical_bruteforce`] scans every
//! uncolourable series-parallel graph within the bound and keeps the
//! critical ones. The two catalogs are keyed by terminal-free graph keys so
//! they can be compared directly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::enumerate::{Bound, ColourCheck, Enumeration, Prune};
use crate::error::{Error, Result};
use crate::families::{recursive_catalog, AtlasEntry, FamilyCatalog, FamilyTag};
use crate::graph::Graph;
use crate::hom::{forced_set_dp, forced_sets_with_deletions, CriticalReport, Criticality, Oracle, ParallelSplit};
use crate::ring::{enumerate_symmetric_subsets, CycleOrder, SymSet};
use crate::sp::{graph_key, recognize_sp, GraphKey, SpExpr};
use crate::graph::LabeledGraph;

/// Critical graphs found within a bound, keyed up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalCatalog {
    pub order: CycleOrder,
    pub bound: Bound,
    pub members: BTreeMap<GraphKey, CriticalReport>,
    /// Constructed candidates the oracle refused, with the reason.
    pub rejected: Vec<(SpExpr, String)>,
}

impl CriticalCatalog {
    fn empty(order: CycleOrder, bound: Bound) -> Self {
        Self {
            order,
            bound,
            members: BTreeMap::new(),
            rejected: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &GraphKey> {
        self.members.keys()
    }
}

/// A parallel sum proposed by the family construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub expr: SpExpr,
    pub left: SpExpr,
    pub right: SpExpr,
    pub left_tag: FamilyTag,
    pub right_tag: FamilyTag,
}

/// Every `G1 ∥ G2` with `G1 ∈ F_S^T`, `G2 ∈ F_T^S` (both orientations of
/// `G2`) over disjoint nonempty symmetric `S, T` within the bound.
pub fn theorem_candidates(order: CycleOrder, bound: Bound) -> Vec<Candidate> {
    // Each factor has at least one edge fewer than the sum.
    let factor_bound = Bound::new(bound.max_vertices, bound.max_edges.saturating_sub(1).max(1));
    let cat = recursive_catalog(order, factor_bound);
    let sets = enumerate_symmetric_subsets(order, true);
    let mut out = Vec::new();
    for &s in &sets {
        for &t in &sets {
            if s >= t || !s.is_disjoint(t) {
                continue;
            }
            let (Ok(lt), Ok(rt)) = (FamilyTag::new(s, t), FamilyTag::new(t, s)) else {
                continue;
            };
            let (Some(left), Some(right)) = (cat.family(&lt), cat.family(&rt)) else {
                continue;
            };
            for a in left.values() {
                for b in right.values() {
                    let v = a.vertex_count() + b.vertex_count() - 2;
                    if !bound.admits(v, a.edge_count() + b.edge_count()) {
                        continue;
                    }
                    for b in [b.clone(), b.reversed()] {
                        if let Ok(expr) = SpExpr::parallel_sum(a.clone(), b.clone()) {
                            out.push(Candidate {
                                expr,
                                left: a.clone(),
                                right: b,
                                left_tag: lt,
                                right_tag: rt,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Oracle verdict on one constructed candidate: the graph key with its
/// report, or a reason for rejection.
pub fn verify_candidate(oracle: &Oracle, c: &Candidate) -> Result<core::result::Result<(GraphKey, CriticalReport), String>> {
    let g = c.expr.realize()?;
    let order = oracle.order();
    let (ls, rs) = (forced_set_dp(&c.left, order), forced_set_dp(&c.right, order));
    if ls != c.left_tag.set || rs != c.right_tag.set {
        return Ok(Err(format!("factor sets {ls}, {rs} differ from tags {}, {}", c.left_tag, c.right_tag)));
    }
    match oracle.criticality(&g.graph)? {
        Criticality::Critical(mut report) => {
            report.split = Some(ParallelSplit {
                s: g.s,
                t: g.t,
                left: c.left.clone(),
                right: c.right.clone(),
                left_set: ls,
                right_set: rs,
            });
            Ok(Ok((graph_key(&g.graph)?, report)))
        }
        Criticality::Colourable(_) => Ok(Err("colourable".into())),
        Criticality::NotMinimal { edge } => Ok(Err(format!("edge {edge} is redundant"))),
        Criticality::IsolatedVertex { vertex } => Ok(Err(format!("vertex {vertex} is isolated"))),
    }
}

/// Critical graphs by the family construction, each re-verified by the
/// colouring oracle.
pub fn generate_critical(order: CycleOrder, bound: Bound) -> Result<CriticalCatalog> {
    let oracle = Oracle::new(order).allow_large();
    let mut cat = CriticalCatalog::empty(order, bound);
    for c in theorem_candidates(order, bound) {
        match verify_candidate(&oracle, &c)? {
            Ok((key, report)) => {
                cat.members.entry(key).or_insert(report);
            }
            Err(why) => cat.rejected.push((c.expr, why)),
        }
    }
    Ok(cat)
}

/// Every uncolourable series-parallel graph within the bound all of whose
/// proper sub-expressions are colourable, decided by the oracle.
pub fn bruteforce_candidates(order: CycleOrder, bound: Bound) -> Vec<SpExpr> {
    let run = Enumeration::run(
        bound,
        Prune::Colourable {
            order,
            check: ColourCheck::Oracle,
        },
    );
    run.uncolourable().to_vec()
}

/// Oracle criticality of one scanned expression; keyed and split when
/// critical.
pub fn classify(oracle: &Oracle, e: &SpExpr) -> Result<Option<(GraphKey, CriticalReport)>> {
    let g = e.realize()?;
    let Some(mut report) = oracle.is_critical(&g.graph)? else {
        return Ok(None);
    };
    report.split = find_split(oracle.order(), &g.graph);
    Ok(Some((graph_key(&g.graph)?, report)))
}

/// Critical graphs by exhaustive scan.
pub fn filter_critical_bruteforce(order: CycleOrder, bound: Bound) -> Result<CriticalCatalog> {
    let oracle = Oracle::new(order).allow_large();
    let mut cat = CriticalCatalog::empty(order, bound);
    for e in bruteforce_candidates(order, bound) {
        if let Some((key, report)) = classify(&oracle, &e)? {
            cat.members.entry(key).or_insert(report);
        }
    }
    Ok(cat)
}

/// A terminal pair and a bipartition of the top parallel composition into
/// two parts with disjoint forced sets, if one exists.
pub fn find_split(order: CycleOrder, g: &Graph) -> Option<ParallelSplit> {
    let n = g.vertex_count();
    for s in 0..n {
        for t in s + 1..n {
            let Ok(lg) = LabeledGraph::new(g.clone(), s, t) else {
                continue;
            };
            let Ok(SpExpr::Parallel(parts)) = recognize_sp(&lg) else {
                continue;
            };
            if parts.len() > 16 {
                continue;
            }
            // The first part always goes left, so each split is seen once.
            for mask in 0u32..1 << (parts.len() - 1) {
                let mask = (mask << 1) | 1;
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (i, p) in parts.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(p.clone());
                    } else {
                        right.push(p.clone());
                    }
                }
                if right.is_empty() {
                    continue;
                }
                let (left, right) = (join(left), join(right));
                let (ls, rs) = (forced_set_dp(&left, order), forced_set_dp(&right, order));
                if ls.is_disjoint(rs) {
                    return Some(ParallelSplit {
                        s,
                        t,
                        left,
                        right,
                        left_set: ls,
                        right_set: rs,
                    });
                }
            }
        }
    }
    None
}

fn join(mut parts: Vec<SpExpr>) -> SpExpr {
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        SpExpr::Parallel(parts)
    }
}

/// Outcome of one verification pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
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

/// Every member is 2-connected and each piece cut off by a 2-vertex cut is
/// restricted.
pub fn verify_structure(cat: &CriticalCatalog) -> Result<Check> {
    let oracle = Oracle::new(cat.order).allow_large();
    let mut check = Check::new("structure");
    for (key, report) in &cat.members {
        check.checked += 1;
        for v in oracle.cut_structure_violations(&report.graph)? {
            check.failures.push(format!("{key}: {v:?}"));
        }
    }
    Ok(check)
}

/// Stored witnesses colour every edge deletion, the graph itself has no
/// colouring, and any recorded split has disjoint forced sets with every
/// edge of one side newly forcing an element of the other side's set.
pub fn verify_certificates(cat: &CriticalCatalog) -> Result<Check> {
    let oracle = Oracle::new(cat.order).allow_large();
    let mut check = Check::new("certificates");
    for (key, r) in &cat.members {
        check.checked += 1;
        if !r.witnesses_valid() {
            check.failures.push(format!("{key}: invalid edge-deletion witness"));
        }
        if oracle.has_hom(&r.graph)?.is_some() {
            check.failures.push(format!("{key}: colourable"));
        }
        let Some(split) = &r.split else {
            continue;
        };
        if !split.left_set.is_disjoint(split.right_set) {
            check.failures.push(format!("{key}: split sets overlap"));
        }
        for (side, other) in [(&split.left, split.right_set), (&split.right, split.left_set)] {
            let (_, deleted) = forced_sets_with_deletions(side, cat.order);
            if let Some(i) = deleted.iter().position(|d| d.is_disjoint(other)) {
                check.failures.push(format!("{key}: edge {i} of a factor forces nothing new across"));
            }
        }
    }
    Ok(check)
}

/// Contrapositive of the two-pentagon / no-8-or-10-cycle colourability
/// criterion over `Z_5`, plus its supporting facts about the families.
///
/// `families` should be a closure over `Z_5` large enough to contain
/// `H4 + H5` (thirteen vertices); `atlas` supplies `H4` and `H5`.
pub fn verify_colourability_theorem(cat: &CriticalCatalog, families: &FamilyCatalog, atlas: &[AtlasEntry]) -> Result<Vec<Check>> {
    require_k2(cat.order)?;
    require_k2(families.order)?;
    let mut main = Check::new("critical members with odd girth >= 5");
    for (key, r) in &cat.members {
        let g = &r.graph;
        if g.odd_girth().is_none_or(|og| og < 5) {
            continue;
        }
        main.checked += 1;
        if !g.two_c5_sharing_vertex()? {
            main.failures.push(format!("{key}: no two 5-cycles share a vertex"));
        }
        if !(g.has_cycle_of_length(8)? || g.has_cycle_of_length(10)?) {
            main.failures.push(format!("{key}: neither an 8-cycle nor a 10-cycle"));
        }
    }

    let find = |name: &str| {
        atlas
            .iter()
            .find(|h| h.name == name)
            .map(|h| h.expr.clone())
            .ok_or_else(|| Error::Atlas(format!("{name} missing")))
    };
    let h4h5 = SpExpr::serial_sum(find("H4")?, find("H5")?);
    let h4h5_key = h4h5.canonical_key();

    let mut pentagons = Check::new("family members above 5 vertices share a 5-cycle vertex");
    let mut long = Check::new("family members above 9 vertices other than H4+H5 have an 8- or 10-cycle");
    for (key, e) in families.union() {
        let g = e.realize()?.graph;
        if g.vertex_count() > 5 {
            pentagons.checked += 1;
            if !g.two_c5_sharing_vertex()? {
                pentagons.failures.push(format!("{key}"));
            }
        }
        if g.vertex_count() > 9 && key != h4h5_key {
            long.checked += 1;
            if !(g.has_cycle_of_length(8)? || g.has_cycle_of_length(10)?) {
                long.failures.push(format!("{key}"));
            }
        }
    }

    let mut colourable = Check::new("H4+H5 is colourable");
    colourable.checked = 1;
    let g = h4h5.realize()?.graph;
    if Oracle::new(cat.order).has_hom(&g)?.is_none() {
        colourable.failures.push("H4+H5 has no colouring".into());
    }
    Ok(alloc::vec![main, pentagons, long, colourable])
}

/// Every member has girth at most 6.
pub fn verify_girth_bound(cat: &CriticalCatalog) -> Result<Check> {
    require_k2(cat.order)?;
    let mut check = Check::new("girth at most 6");
    for (key, r) in &cat.members {
        check.checked += 1;
        match r.graph.girth() {
            Some(g) if g <= 6 => {}
            other => check.failures.push(format!("{key}: girth {other:?}")),
        }
    }
    Ok(check)
}

/// Within the bound, `F_s(i)^s(j)` is empty for `i != 1`, and every member
/// of `F_s1^s(j)` is `K2` or `K2` joined in series to a minimally
/// `s0`-forcing graph.
pub fn verify_orbit_families(cat: &FamilyCatalog) -> Check {
    let order = cat.order;
    let mut check = Check::new("orbit-refined families");
    let s0 = SymSet::orbit(order, 0);
    for (tag, key, e) in cat.entries() {
        let (Some(i), Some(j)) = (orbit_index(tag.set), orbit_index(tag.target)) else {
            continue;
        };
        check.checked += 1;
        if i != 1 {
            check.failures.push(format!("{key} in F_s{i}^s{j}"));
            continue;
        }
        let ok = match e {
            SpExpr::Edge => true,
            SpExpr::Serial(parts) => {
                let last = parts.len() - 1;
                [(0usize, 1usize, parts.len()), (last, 0, last)].iter().any(|&(edge, lo, hi)| {
                    matches!(parts[edge], SpExpr::Edge) && {
                        let rest = join_serial(parts[lo..hi].to_vec());
                        crate::hom::is_minimally_forcing(&rest, order) == Some(s0)
                    }
                })
            }
            SpExpr::Parallel(_) => false,
        };
        if !ok {
            check.failures.push(format!("{key} in F_s1^s{j} is not K2 or K2 + (s0-forcing)"));
        }
    }
    check
}

fn join_serial(mut parts: Vec<SpExpr>) -> SpExpr {
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        SpExpr::Serial(parts)
    }
}

fn orbit_index(s: SymSet) -> Option<u32> {
    (0..=s.order().k()).find(|&i| SymSet::orbit(s.order(), i) == s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{base_atlas, build_t_closure};

    fn o(k: u32) -> CycleOrder {
        CycleOrder::new(k).unwrap()
    }

    fn k3() -> SpExpr {
        SpExpr::parallel_sum(SpExpr::Edge, SpExpr::path(2)).unwrap()
    }

    #[test]
    fn triangle_is_the_only_small_member() {
        for k in [2, 3] {
            let cat = generate_critical(o(k), Bound::vertices(3)).unwrap();
            let keys: Vec<_> = cat.keys().cloned().collect();
            let g = k3().realize().unwrap().graph;
            assert_eq!(keys, alloc::vec![graph_key(&g).unwrap()]);
            assert!(cat.rejected.is_empty());
        }
    }

    #[test]
    fn generation_matches_scan_small() {
        for (k, v) in [(2, 9), (3, 8)] {
            let a = generate_critical(o(k), Bound::vertices(v)).unwrap();
            let b = filter_critical_bruteforce(o(k), Bound::vertices(v)).unwrap();
            assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
            assert!(a.rejected.is_empty());
        }
    }

    #[test]
    fn c5_members_up_to_nine_vertices() {
        // Only K3 until the 12-vertex sums appear.
        let cat = generate_critical(o(2), Bound::vertices(9)).unwrap();
        assert_eq!(cat.len(), 1);
    }

    #[test]
    fn certificates_and_structure_hold() {
        let cat = generate_critical(o(2), Bound::vertices(12)).unwrap();
        assert!(verify_structure(&cat).unwrap().passed());
        assert!(verify_certificates(&cat).unwrap().passed());
        assert!(verify_girth_bound(&cat).unwrap().passed());
    }

    #[test]
    fn structure_rejects_a_cut_vertex() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let mut cat = generate_critical(o(2), Bound::vertices(3)).unwrap();
        let mut r = cat.members.values().next().unwrap().clone();
        r.graph = g;
        cat.members.insert(GraphKey(alloc::vec![b'x']), r);
        assert!(!verify_structure(&cat).unwrap().passed());
    }

    #[test]
    fn scan_split_is_disjoint() {
        let cat = filter_critical_bruteforce(o(2), Bound::vertices(5)).unwrap();
        for r in cat.members.values() {
            let split = r.split.as_ref().unwrap();
            assert!(split.left_set.is_disjoint(split.right_set));
        }
    }

    #[test]
    fn colourability_checks_at_twelve() {
        let cat = generate_critical(o(2), Bound::vertices(12)).unwrap();
        let fam = build_t_closure(Bound::vertices(13));
        let atlas = base_atlas().unwrap();
        for c in verify_colourability_theorem(&cat, &fam, &atlas).unwrap() {
            assert!(c.passed(), "{c:?}");
            assert!(c.checked > 0, "{}", c.name);
        }
    }

    #[test]
    fn colourability_theorem_needs_k2() {
        let cat = generate_critical(o(3), Bound::vertices(3)).unwrap();
        let fam = build_t_closure(Bound::vertices(5));
        assert!(verify_colourability_theorem(&cat, &fam, &[]).is_err());
        assert!(verify_girth_bound(&cat).is_err());
    }

    #[test]
    fn orbit_families_are_thin() {
        for k in [2, 3] {
            let order = o(k);
            let tags: Vec<_> = FamilyTag::all(order)
                .into_iter()
                .filter(|t| orbit_index(t.set).is_some() && orbit_index(t.target).is_some())
                .collect();
            let cat = recursive_catalog(order, Bound::edges(8)).only(&tags);
            let check = verify_orbit_families(&cat);
            assert!(check.passed(), "{check:?}");
            assert!(check.checked >= 1);
        }
    }
}
