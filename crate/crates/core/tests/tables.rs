//! Finite-table invariants over the corpus.

use std::sync::Arc;

use beckdiff::beck::{identity_pullback_matches, verify_torsor};
use beckdiff::corpus::{fixture_algebras, ring_corpus};
use beckdiff::fpalg::{enumerate_homs, search_ring_homs, to_finite_table, FiniteRingTable};
use beckdiff::grpbeck::{
    fixture_groups, group_surjections, semidirect_product, verify_group_torsor, GModuleTable,
};

/// Independent count: table-level unital homs `B_table → D` by exhaustive
/// closure search, compared with the presentation-level enumeration.
#[test]
fn hom_enumeration_matches_table_search() {
    let corpus = ring_corpus(9, 0).unwrap();
    let targets: Vec<Arc<FiniteRingTable>> = corpus
        .beck_modules
        .iter()
        .filter(|b| b.module.total().size() <= 16)
        .map(|b| b.module.total().clone())
        .chain(corpus.torsors.iter().map(|t| t.map.source().clone()))
        .collect();
    let mut pairs = 0;
    for a in fixture_algebras().unwrap() {
        let b = &a.presentation;
        let Ok(bt) = to_finite_table(b) else { continue };
        if bt.table().size() > 27 {
            continue;
        }
        for d in &targets {
            if !d.accepts_base(b.base()) {
                continue;
            }
            let homs = enumerate_homs(b, d).unwrap();
            let all: Vec<usize> = (0..d.size()).collect();
            let table_homs = search_ring_homs(bt.table(), d, &|_| all.clone(), usize::MAX);
            assert_eq!(homs.len(), table_homs.len(), "{} -> table of size {}", a.id, d.size());
            // each table hom restricts to a generator assignment in the set
            for m in &table_homs {
                let imgs: Vec<usize> = bt.generator_images().iter().map(|&g| m[g]).collect();
                assert!(homs.index_of(&imgs).is_some());
            }
            pairs += 1;
        }
    }
    assert!(pairs > 100, "only {pairs} pairs compared");
}

/// Post-composition with a verified map lands in the target hom set.
#[test]
fn composition_stays_in_hom_sets() {
    let corpus = ring_corpus(9, 0).unwrap();
    for a in fixture_algebras().unwrap().iter().filter(|a| a.presentation.base().is_field()) {
        for t in &corpus.torsors {
            if !t.map.source().accepts_base(a.presentation.base()) {
                continue;
            }
            let hz = enumerate_homs(&a.presentation, t.map.source()).unwrap();
            let hy = enumerate_homs(&a.presentation, t.map.target()).unwrap();
            for h in hz.iter() {
                let c = h.then(&t.map).unwrap();
                assert!(hy.index_of(c.images()).is_some(), "{} along {}", a.id, t.id);
            }
        }
    }
}

/// For square-zero kernels the action `c·k = d·k` does not depend on the
/// preimage `d` of `c`; every Beck module is a split torsor for itself and
/// pulls back along the identity to itself.
#[test]
fn torsor_invariants() {
    let corpus = ring_corpus(9, 0).unwrap();
    for t in &corpus.torsors {
        let Ok(cand) = verify_torsor(&t.map) else { continue };
        let z = cand.total();
        for c in 0..cand.base().size() {
            let fiber = t.map.fiber(c);
            for &k in cand.kernel() {
                let v = z.mul(fiber[0], k);
                assert!(fiber.iter().all(|&d| z.mul(d, k) == v), "{}: action depends on the preimage", t.id);
            }
        }
    }
    for b in &corpus.beck_modules {
        let cand = verify_torsor(b.module.projection()).unwrap();
        assert!(cand.is_split(), "{}", b.id);
        assert_eq!(cand.kernel().len(), b.module.module().size());
        assert!(identity_pullback_matches(&b.module).unwrap(), "{}", b.id);
    }
}

#[test]
fn group_torsor_invariants() {
    let groups = fixture_groups(8);
    for g in groups.iter().filter(|g| g.size() <= 4) {
        for n in [2, 3, 4] {
            let m = GModuleTable::trivial_action(g.clone(), n).unwrap();
            let ext = semidirect_product(&m).unwrap();
            let t = verify_group_torsor(&ext.projection).unwrap();
            assert!(t.is_split());
            assert_eq!(t.fiber_product_size, n * ext.total.size());
        }
    }
    for (id, q) in group_surjections(&groups, 2, 1_000_000).unwrap() {
        if let Ok(t) = verify_group_torsor(&q) {
            let pair: usize = (0..q.target().size()).map(|h| q.fiber(h).len().pow(2)).sum();
            assert_eq!(t.fiber_product_size, pair, "{id}");
        }
    }
}
