//! JSON records. Every top-level record carries a `schema` string; bump the
//! suffix when a field changes meaning.

use serde::{Deserialize, Serialize};

use oddcyc_core::critical::Check;
use oddcyc_core::hom::{CriticalReport, ParallelSplit};
use oddcyc_core::{AtlasEntry, FamilyTag, Graph, GraphKey, LabeledGraph, SpExpr};

use crate::format::{emit_graph6, GraphFile};

pub const FAMILY_SCHEMA: &str = "oddcyc.family.v1";
pub const CRITICAL_SCHEMA: &str = "oddcyc.critical.v1";
pub const FORCED_SCHEMA: &str = "oddcyc.forced-set.v1";
pub const CHECK_CRITICAL_SCHEMA: &str = "oddcyc.check-critical.v1";
pub const VERIFY_SCHEMA: &str = "oddcyc.verify.v1";
pub const ATLAS_SCHEMA: &str = "oddcyc.atlas.v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub terminals: Option<[usize; 2]>,
}

impl GraphJson {
    pub fn new(g: &Graph, terminals: Option<(usize, usize)>) -> Self {
        Self {
            vertices: g.vertex_count(),
            edges: g.sorted_edges().into_iter().map(|(u, v)| [u, v]).collect(),
            terminals: terminals.map(|(s, t)| [s, t]),
        }
    }

    pub fn from_file(g: &GraphFile) -> Self {
        Self::new(&g.graph, g.terminals)
    }

    pub fn to_file(&self) -> oddcyc_core::Result<GraphFile> {
        let edges: Vec<_> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let graph = Graph::new(self.vertices, &edges)?;
        if let Some([s, t]) = self.terminals {
            LabeledGraph::new(graph.clone(), s, t)?;
        }
        Ok(GraphFile {
            graph,
            terminals: self.terminals.map(|[s, t]| (s, t)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub schema: String,
    pub k: u32,
    pub tag: String,
    pub set: String,
    pub target: String,
    pub key: String,
    pub vertices: usize,
    pub edge_count: usize,
    pub graph: GraphJson,
    /// Per edge, the least element of the target newly forced when that
    /// edge is deleted.
    pub new_elements: Vec<Option<u32>>,
}

impl FamilyRecord {
    pub fn new(tag: &FamilyTag, expr: &SpExpr) -> oddcyc_core::Result<Self> {
        let g = expr.realize()?;
        Ok(Self {
            schema: FAMILY_SCHEMA.into(),
            k: tag.order().k(),
            tag: tag.to_string(),
            set: tag.set.to_string(),
            target: tag.target.to_string(),
            key: expr.canonical_key().to_string(),
            vertices: g.graph.vertex_count(),
            edge_count: g.graph.edge_count(),
            graph: GraphJson::new(&g.graph, Some((g.s, g.t))),
            new_elements: oddcyc_core::families::new_element_witnesses(expr, tag),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitJson {
    pub s: usize,
    pub t: usize,
    pub left_key: String,
    pub right_key: String,
    pub left_set: String,
    pub right_set: String,
}

impl SplitJson {
    pub fn new(s: &ParallelSplit) -> Self {
        Self {
            s: s.s,
            t: s.t,
            left_key: s.left.canonical_key().to_string(),
            right_key: s.right.canonical_key().to_string(),
            left_set: s.left_set.to_string(),
            right_set: s.right_set.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalRecord {
    pub schema: String,
    pub k: u32,
    pub key: String,
    pub vertices: usize,
    pub edge_count: usize,
    pub girth: Option<usize>,
    pub odd_girth: Option<usize>,
    pub graph6: String,
    pub graph: GraphJson,
    /// `witnesses[i]` colours the graph with edge `graph.edges[i]` deleted.
    pub witnesses: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub split: Option<SplitJson>,
}

impl CriticalRecord {
    pub fn new(key: &GraphKey, r: &CriticalReport) -> Self {
        let g = &r.graph;
        // Witnesses follow the graph's own edge order; re-key them to the
        // sorted order used in `graph.edges`.
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.sort_by_key(|&i| g.edges()[i]);
        Self {
            schema: CRITICAL_SCHEMA.into(),
            k: r.order.k(),
            key: key.to_string(),
            vertices: g.vertex_count(),
            edge_count: g.edge_count(),
            girth: g.girth(),
            odd_girth: g.odd_girth(),
            graph6: emit_graph6(&GraphFile::plain(g.clone())).trim_end().to_string(),
            graph: GraphJson::new(g, None),
            witnesses: order.iter().map(|&i| r.witnesses[i].0.clone()).collect(),
            split: r.split.as_ref().map(SplitJson::new),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub x: u32,
    pub colouring: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedSetReport {
    pub schema: String,
    pub k: u32,
    pub set: String,
    pub name: String,
    pub method: String,
    pub terminals: [usize; 2],
    pub witnesses: Vec<WitnessJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCriticalReport {
    pub schema: String,
    pub k: u32,
    pub critical: bool,
    pub verdict: String,
    pub series_parallel: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    pub graph: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub colouring: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub redundant_edge: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub isolated_vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub record: Option<CriticalRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl From<&Check> for CheckJson {
    fn from(c: &Check) -> Self {
        Self {
            name: c.name.clone(),
            passed: c.passed(),
            checked: c.checked,
            failures: c.failures.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub k: u32,
    pub max_vertices: usize,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasRecord {
    pub schema: String,
    pub name: String,
    pub tag: String,
    pub set: String,
    pub key: String,
    pub vertices: usize,
    pub edge_count: usize,
    pub graph: GraphJson,
}

impl AtlasRecord {
    pub fn new(h: &AtlasEntry) -> oddcyc_core::Result<Self> {
        let g = h.expr.realize()?;
        Ok(Self {
            schema: ATLAS_SCHEMA.into(),
            name: h.name.clone(),
            tag: h.tag.to_string(),
            set: h.tag.set.short_name(),
            key: h.expr.canonical_key().to_string(),
            vertices: g.graph.vertex_count(),
            edge_count: g.graph.edge_count(),
            graph: GraphJson::new(&g.graph, Some((g.s, g.t))),
        })
    }
}
