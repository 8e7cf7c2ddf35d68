//! Forced-set algebra of 2-terminal series-parallel graphs over odd cycles,
//! and enumeration of the `C_{2k+1}`-critical series-parallel graphs.
//!
//! Everything here is pure computation on `alloc` collections; file formats,
//! JSON reports and the command-line driver live in the `oddcyc` crate.
#![no_std]

extern crate alloc;

pub mod critical;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod graph;
pub mod hom;
pub mod ring;
pub mod sp;

pub use critical::{filter_critical_bruteforce, generate_critical, Check, CriticalCatalog};
pub use enumerate::{enumerate_expressions, Bound, ColourCheck, Enumeration, Prune};
pub use error::{Error, Result};
pub use families::{base_atlas, build_t_closure, oracle_catalog, recursive_catalog, AtlasEntry, FamilyCatalog, FamilyTag, Route};
pub use graph::{Graph, LabeledGraph};
pub use hom::{Colouring, CriticalReport, Criticality, ForcedSetResult, Oracle};
pub use ring::{enumerate_symmetric_subsets, CycleOrder, SymSet};
pub use sp::{graph_key, recognize_any, recognize_sp, CanonKey, GraphKey, SpExpr};
