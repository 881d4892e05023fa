use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::error::Result;
use crate::grpbeck::{
    enumerate_group_homs, fixture_groups, group_kahler_rank, group_lift_check, group_surjections, load_groups,
    semidirect_product, verify_group_torsor, FiniteGroupTable, GModuleTable, GroupHom, GroupTorsor,
};
use crate::report::{CaseReport, SuiteReport, Verdict};

/// Surjections kept per ordered pair of corpus groups.
pub const SURJECTIONS_PER_PAIR: usize = 2;

#[derive(Debug, Clone)]
pub struct GroupCorpus {
    pub groups: Vec<Arc<FiniteGroupTable>>,
    /// Candidate torsors `E → G` between corpus groups.
    pub surjections: Vec<(String, GroupHom)>,
    /// `G`-modules whose semidirect products must come out split.
    pub modules: Vec<(String, GModuleTable)>,
}

/// Small `G`-modules: `ℤ/2` and `ℤ/3` with trivial action, and `ℤ/3`
/// twisted by each sign character `G → ℤ/2`.
fn small_modules(groups: &[Arc<FiniteGroupTable>], max_homs: u64) -> Result<Vec<(String, GModuleTable)>> {
    let z2 = Arc::new(FiniteGroupTable::cyclic(2));
    let mut out = Vec::new();
    for g in groups.iter().filter(|g| g.size() <= 4) {
        for n in [2usize, 3] {
            out.push((format!("{}|Z{n}", g.name()), GModuleTable::trivial_action(g.clone(), n)?));
        }
        let homs = enumerate_group_homs(g, &z2, max_homs)?;
        for (k, chi) in homs.homs.iter().filter(|m| m.iter().any(|&x| x != z2.identity())).enumerate() {
            let signs: Vec<bool> = chi.iter().map(|&x| x != z2.identity()).collect();
            out.push((format!("{}|Z3^sign{k}", g.name()), GModuleTable::cyclic_with_signs(g.clone(), 3, &signs)?));
        }
    }
    Ok(out)
}

/// Groups of order at most `max_order`, from `fixtures` or the built-in set.
pub fn group_corpus(max_order: usize, fixtures: Option<&Path>, max_homs: u64) -> Result<GroupCorpus> {
    let groups = match fixtures {
        Some(dir) => load_groups(dir, max_order)?,
        None => fixture_groups(max_order),
    };
    let surjections = group_surjections(&groups, SURJECTIONS_PER_PAIR, max_homs)?;
    let modules = small_modules(&groups, max_homs)?;
    Ok(GroupCorpus { groups, surjections, modules })
}

/// `|E ×_G E|` by direct count over fibers.
fn kernel_pair_size(q: &GroupHom) -> usize {
    (0..q.target().size()).map(|h| q.fiber(h).len().pow(2)).sum()
}

fn torsor_case(id: &str, q: &GroupHom) -> (CaseReport, Option<GroupTorsor>) {
    let cid = format!("gtorsor:{id}");
    match verify_group_torsor(q) {
        Ok(t) => {
            let pair = kernel_pair_size(q);
            let ok = t.fiber_product_size == pair;
            let details = json!({
                "kernel_size": t.kernel.len(),
                "split": t.is_split(),
                "module_fiber_product": t.fiber_product_size,
                "kernel_pair": pair,
            });
            let summary = format!(
                "{}, |K|={}, |M×E|={} |E×E|={}",
                if t.is_split() { "split" } else { "non-split" },
                t.kernel.len(),
                t.fiber_product_size,
                pair
            );
            (CaseReport::new(cid, "torsor verify", if ok { Verdict::Pass } else { Verdict::Fail }, summary, details), Some(t))
        }
        // a surjection whose kernel is not a Beck module is simply not a torsor
        Err(e) => (
            CaseReport::new(cid, "torsor verify", Verdict::Pass, format!("not a torsor: {e}"), json!({ "rejected": e.to_string() })),
            None,
        ),
    }
}

fn semidirect_case(id: &str, m: &GModuleTable) -> (CaseReport, Option<GroupTorsor>) {
    let cid = format!("semidirect:{id}");
    let res = semidirect_product(m).and_then(|ext| verify_group_torsor(&ext.projection));
    match res {
        Ok(t) => {
            let pair = kernel_pair_size(&t.map);
            let ok = t.is_split() && t.fiber_product_size == pair;
            let details = json!({ "total_size": t.total().size(), "split": t.is_split(), "kernel_pair": pair });
            let summary = format!("|E|={}, split {}", t.total().size(), t.is_split());
            (CaseReport::new(cid, "torsor verify", if ok { Verdict::Pass } else { Verdict::Fail }, summary, details), Some(t))
        }
        Err(e) => (CaseReport::error(cid, "torsor verify", &e), None),
    }
}

fn group_case(g: &FiniteGroupTable, torsors: &[(String, GroupTorsor)], max_homs: u64) -> Result<CaseReport> {
    let rank = group_kahler_rank(g);
    let mut collisions = Vec::new();
    for (id, t) in torsors {
        let r = group_lift_check(g, &t.map, max_homs)?;
        if let Some((a, b)) = r.collision {
            collisions.push(json!({ "torsor": id, "collision": [a, b] }));
        }
    }
    let lifts_unique = collisions.is_empty();
    let ok = (rank == 0) == lifts_unique;
    let details = json!({
        "kahler_rank": rank,
        "torsors_checked": torsors.len(),
        "unramified": lifts_unique,
        "collisions": collisions,
    });
    let summary = format!("rank {rank}, {} of {} torsors collide", details["collisions"].as_array().map_or(0, Vec::len), torsors.len());
    Ok(CaseReport::new(
        format!("group:{}", g.name()),
        "groups unramified",
        if ok { Verdict::Pass } else { Verdict::Fail },
        summary,
        details,
    ))
}

/// Runs the group suite: torsor verification for every corpus surjection and
/// semidirect product, then the lifting check for every group against all
/// verified torsors.
pub fn run_group_suite(
    max_order: usize,
    seed: u64,
    fixtures: Option<&Path>,
    max_homs: u64,
    timings: bool,
) -> Result<SuiteReport> {
    let corpus = group_corpus(max_order, fixtures, max_homs)?;
    let pool = super::thread_pool();
    let (mut cases, torsors) = pool.install(|| -> Result<(Vec<CaseReport>, Vec<(String, GroupTorsor)>)> {
        let timed = |f: &dyn Fn() -> (CaseReport, Option<GroupTorsor>)| {
            let start = std::time::Instant::now();
            let (mut r, t) = f();
            if timings {
                r.elapsed_ms = start.elapsed().as_millis() as u64;
            }
            (r, t)
        };
        let torsor_results: Vec<(CaseReport, Option<(String, GroupTorsor)>)> = corpus
            .surjections
            .par_iter()
            .map(|(id, q)| {
                let (r, t) = timed(&|| torsor_case(id, q));
                (r, t.map(|t| (format!("gtorsor:{id}"), t)))
            })
            .chain(corpus.modules.par_iter().map(|(id, m)| {
                let (r, t) = timed(&|| semidirect_case(id, m));
                (r, t.map(|t| (format!("semidirect:{id}"), t)))
            }))
            .collect();
        let mut cases = Vec::new();
        let mut torsors = Vec::new();
        for (r, t) in torsor_results {
            cases.push(r);
            torsors.extend(t);
        }
        let group_cases: Vec<CaseReport> = corpus
            .groups
            .par_iter()
            .map(|g| {
                let start = std::time::Instant::now();
                let mut r = group_case(g, &torsors, max_homs)
                    .unwrap_or_else(|e| CaseReport::error(format!("group:{}", g.name()), "groups unramified", &e));
                if timings {
                    r.elapsed_ms = start.elapsed().as_millis() as u64;
                }
                r
            })
            .collect();
        cases.extend(group_cases);
        Ok((cases, torsors))
    })?;
    cases.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    let unramified: Vec<&str> = corpus
        .groups
        .iter()
        .filter(|g| {
            cases
                .iter()
                .find(|c| c.case_id == format!("group:{}", g.name()))
                .is_some_and(|c| c.details["unramified"] == json!(true))
        })
        .map(|g| g.name())
        .collect();
    let summary = json!({
        "groups": corpus.groups.len(),
        "torsors_verified": torsors.len(),
        "surjections": corpus.surjections.len(),
        "unramified groups found": format!("[{}]", unramified.join(", ")),
    });
    Ok(SuiteReport { suite: "groups".into(), max_size: max_order, seed, cases, summary })
}
