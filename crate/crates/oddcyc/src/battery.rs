//! The verification battery behind `oddcyc verify`. Each function returns
//! one [`Check`]; [`run`] strings them together for a given order.

use oddcyc_core::critical::{
    verify_certificates, verify_colourability_theorem, verify_girth_bound, verify_orbit_families, verify_structure, Check,
};
use oddcyc_core::families::{base_atlas, build_t_closure, oracle_catalog, recursive_catalog, AtlasEntry, Route};
use oddcyc_core::{
    enumerate_symmetric_subsets, graph_key, recognize_sp, Bound, CriticalCatalog, CycleOrder, FamilyCatalog, FamilyTag,
    Result, SpExpr, SymSet,
};

use crate::drive;
use crate::format::{emit_dot, emit_edgelist, emit_graph6, parse_dot, parse_edgelist, parse_graph6, GraphFile};
use crate::report::GraphJson;

/// Sums of the nonempty proper symmetric subsets of `Z_5`, rows and
/// columns in the order `s0 s1 s2 sb0 sb1 sb2`.
pub const C5_SUM_TABLE: [[&str; 6]; 6] = [
    ["s0", "s1", "s2", "sb0", "sb1", "sb2"],
    ["s1", "sb1", "sb0", "Z", "sb0", "Z"],
    ["s2", "sb0", "sb2", "Z", "Z", "sb0"],
    ["sb0", "Z", "Z", "Z", "Z", "Z"],
    ["sb1", "sb0", "Z", "Z", "Z", "Z"],
    ["sb2", "Z", "sb0", "Z", "Z", "Z"],
];

pub const C5_LABELS: [&str; 6] = ["s0", "s1", "s2", "sb0", "sb1", "sb2"];

fn check(name: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        checked: 0,
        failures: Vec::new(),
    }
}

fn k2() -> CycleOrder {
    CycleOrder::new(2).expect("k = 2 is in range")
}

pub fn sum_table() -> Result<Check> {
    let o = k2();
    let mut c = check("sum table over Z5");
    for (i, row) in C5_SUM_TABLE.iter().enumerate() {
        let a = SymSet::parse(o, C5_LABELS[i])?;
        for (j, cell) in row.iter().enumerate() {
            let b = SymSet::parse(o, C5_LABELS[j])?;
            let want = SymSet::parse(o, cell)?;
            let got = a.mink_sum(b)?;
            c.checked += 1;
            if got != want {
                c.failures.push(format!("{} + {} = {got}, expected {cell}", C5_LABELS[i], C5_LABELS[j]));
            }
        }
    }
    Ok(c)
}

/// `complement(Q_S) ⊆ (complement Q)_S` for all symmetric `Q` and nonempty
/// symmetric `S`, for every `k` up to `max_k`.
pub fn complement_fact(max_k: u32) -> Result<Check> {
    let mut c = check(format!("complement inclusion, k <= {max_k}"));
    for k in 1..=max_k {
        let o = CycleOrder::new(k)?;
        let all = enumerate_symmetric_subsets(o, false);
        for &q in &all {
            for &s in all.iter().filter(|s| !s.is_empty()) {
                c.checked += 1;
                if !q.shift_hits(s)?.complement().is_subset(q.complement().shift_hits(s)?) {
                    c.failures.push(format!("k={k} Q={q} S={s}"));
                }
            }
        }
    }
    Ok(c)
}

fn compare(c: &mut Check, built: &FamilyCatalog, scanned: &FamilyCatalog, tags: &[FamilyTag]) {
    for tag in tags {
        let (a, b) = (built.keys(tag), scanned.keys(tag));
        c.checked += a.len().max(b.len());
        for k in a.difference(&b) {
            c.failures.push(format!("{tag}: {k} built but not found by scan"));
        }
        for k in b.difference(&a) {
            c.failures.push(format!("{tag}: {k} found by scan but not built"));
        }
    }
}

/// Over `Z_5`, the six closure families equal the minimally forcing
/// graphs found by colouring search.
pub fn closure_matches_search(max_vertices: usize) -> Result<Check> {
    let o = k2();
    let bound = Bound::vertices(max_vertices);
    let tags = FamilyTag::all_plain(o);
    let built = build_t_closure(bound);
    let scanned = oracle_catalog(o, bound, &tags, Route::Oracle)?;
    let mut c = check(format!("closure = search, six families, up to {max_vertices} vertices"));
    compare(&mut c, &built, &scanned, &tags);
    Ok(c)
}

/// Every refined family built by the composition recursion equals the
/// search result.
pub fn recursion_matches_search(order: CycleOrder, bound: Bound) -> Result<Check> {
    let tags = FamilyTag::all(order);
    let built = recursive_catalog(order, bound);
    let scanned = oracle_catalog(order, bound, &tags, Route::Oracle)?;
    let mut c = check(format!(
        "recursion = search, {} refined families, {order}, up to {} vertices / {} edges",
        tags.len(),
        bound.max_vertices,
        bound.max_edges
    ));
    compare(&mut c, &built, &scanned, &tags);
    Ok(c)
}

/// The six base graphs: counts, sizes and cycle anchors.
pub fn atlas_anchors() -> Result<(Check, Vec<AtlasEntry>)> {
    let mut c = check("six base graphs up to 10 vertices");
    c.checked = 1;
    let atlas = match base_atlas() {
        Ok(a) => a,
        Err(e) => {
            c.failures.push(e.to_string());
            return Ok((c, Vec::new()));
        }
    };
    let union = build_t_closure(Bound::vertices(10)).union();
    let sizes: Vec<usize> = union.values().map(|e| e.vertex_count()).collect();
    if union.len() != 6 {
        c.failures.push(format!("union has {} members", union.len()));
    }
    for need in [2, 3, 9, 10] {
        if !sizes.contains(&need) {
            c.failures.push(format!("no member with {need} vertices"));
        }
    }
    for e in union.values() {
        let g = e.realize()?.graph;
        if g.vertex_count() == 9 && !g.two_c5_sharing_vertex()? {
            c.failures.push("9-vertex member lacks two 5-cycles through one vertex".into());
        }
        if g.vertex_count() == 10 && !g.has_cycle_of_length(8)? {
            c.failures.push("10-vertex member lacks an 8-cycle".into());
        }
    }
    Ok((c, atlas))
}

/// Constructed and scanned catalogs, and their comparison.
pub fn critical_equivalence(order: CycleOrder, max_vertices: usize, jobs: usize) -> Result<(Check, CriticalCatalog)> {
    let bound = Bound::vertices(max_vertices);
    let built = drive::generate_critical(order, bound, jobs)?;
    let scanned = drive::filter_critical_bruteforce(order, bound, jobs)?;
    let mut c = check(format!("construction = scan, {order}-critical, up to {max_vertices} vertices"));
    c.checked = built.len().max(scanned.len());
    for k in built.keys().filter(|k| !scanned.members.contains_key(*k)) {
        c.failures.push(format!("{k} constructed but not found by scan"));
    }
    for k in scanned.keys().filter(|k| !built.members.contains_key(*k)) {
        c.failures.push(format!("{k} found by scan but not constructed"));
    }
    for (e, why) in &built.rejected {
        c.failures.push(format!("constructed {} rejected: {why}", e.canonical_key()));
    }
    Ok((c, built))
}

/// The triangle is the only member on at most three vertices.
pub fn triangle_alone(cat: &CriticalCatalog) -> Check {
    let mut c = check("only K3 up to 3 vertices");
    let small: Vec<_> = cat.members.values().filter(|r| r.graph.vertex_count() <= 3).collect();
    c.checked = small.len();
    let is_k3 = |g: &oddcyc_core::Graph| g.vertex_count() == 3 && g.edge_count() == 3;
    if small.len() != 1 || !is_k3(&small[0].graph) {
        c.failures.push(format!("{} members on <= 3 vertices", small.len()));
    }
    c
}

/// `F_s(i)^s(j)` within 8 edges, by colouring search.
pub fn orbit_families(order: CycleOrder) -> Result<Check> {
    let orbit = |s: SymSet| (0..=order.k()).any(|i| SymSet::orbit(order, i) == s);
    let tags: Vec<_> = FamilyTag::all(order)
        .into_iter()
        .filter(|t| orbit(t.set) && orbit(t.target))
        .collect();
    let cat = oracle_catalog(order, Bound::edges(8), &tags, Route::Oracle)?;
    let mut c = verify_orbit_families(&cat);
    c.name = format!("orbit-refined families, {order}, up to 8 edges");
    Ok(c)
}

/// Emits and re-parses every graph in each format; keys must survive and
/// a second emission must be byte-identical.
pub fn round_trips(labelled: &[(String, SpExpr)], catalogs: &[&CriticalCatalog]) -> Result<Check> {
    let mut c = check("format round trips");
    type Emit = fn(&GraphFile) -> String;
    type Parse = fn(&str) -> std::result::Result<GraphFile, crate::format::ParseError>;
    fn dot(g: &GraphFile) -> String {
        emit_dot(g, "g")
    }
    fn json(g: &GraphFile) -> String {
        serde_json::to_string(&GraphJson::from_file(g)).expect("serialisable")
    }
    fn unjson(s: &str) -> std::result::Result<GraphFile, crate::format::ParseError> {
        let j: GraphJson = serde_json::from_str(s).map_err(|e| crate::format::ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        j.to_file().map_err(|e| crate::format::ParseError {
            line: 1,
            column: 1,
            message: e.to_string(),
        })
    }
    let formats: [(&str, Emit, Parse); 4] = [
        ("edgelist", emit_edgelist, parse_edgelist),
        ("graph6", emit_graph6, parse_graph6),
        ("dot", dot, parse_dot),
        ("json", json, unjson),
    ];
    let mut files = Vec::new();
    for (name, e) in labelled {
        files.push((name.clone(), GraphFile::labeled(&e.realize()?)));
    }
    for cat in catalogs {
        for (k, r) in &cat.members {
            files.push((k.to_string(), GraphFile::plain(r.graph.clone())));
        }
    }
    for (name, file) in &files {
        for (fname, emit, parse) in &formats {
            c.checked += 1;
            let text = emit(file);
            let back = match parse(&text) {
                Ok(b) => b,
                Err(e) => {
                    c.failures.push(format!("{name} {fname}: {e}"));
                    continue;
                }
            };
            if emit(&back) != text {
                c.failures.push(format!("{name} {fname}: second emission differs"));
            }
            let same = match (file.to_labeled(), back.to_labeled()) {
                (Some(a), Some(b)) => recognize_sp(&a)?.canonical_key() == recognize_sp(&b)?.canonical_key(),
                (None, None) => graph_key(&file.graph)? == graph_key(&back.graph)?,
                _ => false,
            };
            if !same {
                c.failures.push(format!("{name} {fname}: key changed"));
            }
        }
    }
    let k3 = GraphFile {
        graph: oddcyc_core::Graph::new(3, &[(0, 1), (1, 2), (0, 2)])?,
        terminals: Some((0, 1)),
    };
    c.checked += 3;
    if emit_graph6(&k3) != "Bw\nt 0 1\n" {
        c.failures.push("K3 graph6 is not `Bw` with sidecar `t 0 1`".into());
    }
    if emit_edgelist(&k3) != "n=3 s=0 t=1\n0 1\n0 2\n1 2\n" {
        c.failures.push("K3 edge list differs from the reference text".into());
    }
    match parse_edgelist("3; 0 1; 1 2; 0 2; terminals 0 1") {
        Ok(g) if g == k3 => {}
        other => c.failures.push(format!("compact K3 parsed as {other:?}")),
    }
    Ok(c)
}

/// The full battery for one order. Over `Z_5` this includes the sum table,
/// the six-family closure, the base graphs and the cycle criteria.
pub fn run(order: CycleOrder, max_vertices: usize, jobs: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let k2 = order.k() == 2;
    if k2 {
        out.push(sum_table()?);
    }
    out.push(drive::dp_oracle_agreement(order, 8, jobs)?);
    out.push(complement_fact(5)?);
    let (crit, cat) = critical_equivalence(order, max_vertices, jobs)?;
    out.push(crit);
    out.push(triangle_alone(&cat));
    out.push(verify_structure(&cat)?);
    out.push(verify_certificates(&cat)?);
    out.push(orbit_families(order)?);
    let family_bound = Bound::vertices(max_vertices.min(10));
    out.push(recursion_matches_search(order, family_bound)?);
    let mut atlas = Vec::new();
    if k2 {
        out.push(closure_matches_search(max_vertices.min(10))?);
        let (anchors, a) = atlas_anchors()?;
        out.push(anchors);
        atlas = a;
        if !atlas.is_empty() {
            let families = build_t_closure(Bound::vertices(13));
            out.extend(verify_colourability_theorem(&cat, &families, &atlas)?);
        }
        out.push(verify_girth_bound(&cat)?);
    }
    let labelled: Vec<_> = atlas.iter().map(|h| (h.name.clone(), h.expr.clone())).collect();
    out.push(round_trips(&labelled, &[&cat])?);
    Ok(out)
}
