//! Multi-threaded versions of the slow scans. Work is split across a rayon
//! pool, results are gathered in input order, so output does not depend on
//! the worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;

use oddcyc_core::critical::{bruteforce_candidates, classify, theorem_candidates, verify_candidate, Check};
use oddcyc_core::hom::forced_set_dp;
use oddcyc_core::{enumerate_expressions, Bound, CriticalCatalog, CycleOrder, Oracle, Result};

/// A pool with `jobs` workers; 0 means one per core.
pub fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

pub fn generate_critical(order: CycleOrder, bound: Bound, jobs: usize) -> Result<CriticalCatalog> {
    let oracle = Oracle::new(order).allow_large();
    let candidates = theorem_candidates(order, bound);
    let verdicts: Vec<_> = pool(jobs).install(|| {
        candidates
            .par_iter()
            .map(|c| verify_candidate(&oracle, c))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut cat = CriticalCatalog {
        order,
        bound,
        members: BTreeMap::new(),
        rejected: Vec::new(),
    };
    for (c, v) in candidates.into_iter().zip(verdicts) {
        match v {
            Ok((key, report)) => {
                cat.members.entry(key).or_insert(report);
            }
            Err(why) => cat.rejected.push((c.expr, why)),
        }
    }
    Ok(cat)
}

pub fn filter_critical_bruteforce(order: CycleOrder, bound: Bound, jobs: usize) -> Result<CriticalCatalog> {
    let oracle = Oracle::new(order).allow_large();
    let candidates = bruteforce_candidates(order, bound);
    let found: Vec<_> = pool(jobs).install(|| {
        candidates
            .par_iter()
            .map(|e| classify(&oracle, e))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut cat = CriticalCatalog {
        order,
        bound,
        members: BTreeMap::new(),
        rejected: Vec::new(),
    };
    for (key, report) in found.into_iter().flatten() {
        cat.members.entry(key).or_insert(report);
    }
    Ok(cat)
}

/// Fold and colouring search agree on every expression up to `max_edges`.
pub fn dp_oracle_agreement(order: CycleOrder, max_edges: usize, jobs: usize) -> Result<Check> {
    let all = enumerate_expressions(max_edges);
    let oracle = Oracle::new(order);
    let mismatches: Vec<Option<String>> = pool(jobs).install(|| {
        all.par_iter()
            .map(|e| {
                let g = e.realize()?;
                let (dp, found) = (forced_set_dp(e, order), oracle.forced_set(&g)?.set);
                Ok((dp != found).then(|| format!("{}: fold {dp}, search {found}", e.canonical_key())))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(Check {
        name: format!("fold = search, {order}, up to {max_edges} edges"),
        checked: all.len(),
        failures: mismatches.into_iter().flatten().collect(),
    })
}
