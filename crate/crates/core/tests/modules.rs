//! Module engine and Kähler differentials against explicit linear algebra.

mod common;

use std::sync::Arc;

use beckdiff::beck::kahler;
use beckdiff::corpus::{fixture_algebras, random_algebras};
use beckdiff::exactnum::BaseKind;
use beckdiff::fpalg::AlgebraPresentation;
use beckdiff::modgb::{is_zero_module, module_normal_form, verify_zero_certificate, FpModulePresentation, FreeModuleElement};
use beckdiff::polyring::{Limits, Monomial, Polynomial};
use common::module_quotient_dim;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

#[test]
fn kahler_of_corpus_matches_oracle() {
    let algs = fixture_algebras().unwrap().into_iter().chain(random_algebras(0, 8));
    let mut checked = 0;
    for a in algs {
        let b = &a.presentation;
        if b.dimension().unwrap().is_none() {
            continue;
        }
        let omega = kahler(b).unwrap();
        let zt = omega.zero_test().unwrap();
        let dim = module_quotient_dim(omega.presentation());
        assert_eq!(zt.is_zero, dim == 0, "{}: engine {} oracle dim {dim}", a.id, zt.is_zero);
        assert!(verify_zero_certificate(omega.presentation(), &zt.certificate).unwrap(), "{}", a.id);
        if omega.rank() > 0 {
            let terms = omega.presentation().standard_terms(Limits::default()).unwrap();
            assert_eq!(terms.len(), dim, "{}: standard terms vs oracle", a.id);
        }
        checked += 1;
    }
    assert!(checked >= 30);
}

fn ambients() -> Vec<Arc<AlgebraPresentation>> {
    let p = |b, g: &[&str], r: &[&str]| Arc::new(AlgebraPresentation::parse(b, g, r).unwrap());
    vec![
        p(BaseKind::Fp(2), &["x"], &["x^3"]),
        p(BaseKind::Fp(3), &["x", "y"], &["x^2", "y^2"]),
        p(BaseKind::Fp(5), &["x"], &["x^2 - 2"]),
        p(BaseKind::Rat, &["x"], &["x^2 - 1"]),
        p(BaseKind::Rat, &["x", "y"], &["x^2", "x*y", "y^2"]),
    ]
}

fn arb_entry(b: Arc<AlgebraPresentation>) -> impl Strategy<Value = Polynomial> {
    let n = b.generators().len();
    proptest::collection::vec((-2i64..3, proptest::collection::vec(0u32..3, n)), 0..3).prop_map(move |ts| {
        let r = b.ring();
        Polynomial::from_terms(r, ts.into_iter().map(|(c, e)| (Monomial::new(e), b.base().from_i64(c))))
    })
}

/// (ambient, rank, relation rows, permutation seed)
fn presentation() -> impl Strategy<Value = (Arc<AlgebraPresentation>, usize, Vec<Vec<Polynomial>>, u64)> {
    (0..ambients().len(), 1usize..3).prop_flat_map(|(k, rank)| {
        let b = ambients()[k].clone();
        let row = proptest::collection::vec(arb_entry(b.clone()), rank);
        (Just(b), Just(rank), proptest::collection::vec(row, 0..4), any::<u64>())
    })
}

fn build(b: &Arc<AlgebraPresentation>, rank: usize, rows: &[Vec<Polynomial>]) -> FpModulePresentation {
    let gens = (0..rank).map(|i| format!("e{i}")).collect();
    let rels = rows.iter().map(|r| FreeModuleElement::new(r.clone()).unwrap()).collect();
    FpModulePresentation::new(b.clone(), gens, rels).unwrap()
}

fn check_presentation(b: Arc<AlgebraPresentation>, rank: usize, rows: Vec<Vec<Polynomial>>, seed: u64) -> Result<(), TestCaseError> {
    let p = build(&b, rank, &rows);
    let zt = is_zero_module(&p).unwrap();
    let dim = module_quotient_dim(&p);
    prop_assert_eq!(zt.is_zero, dim == 0);
    prop_assert!(verify_zero_certificate(&p, &zt.certificate).unwrap());
    prop_assert_eq!(p.standard_terms(Limits::default()).unwrap().len(), dim);

    // permuting relations and generator positions
    let mut rows_p = rows.clone();
    rows_p.reverse();
    if !rows_p.is_empty() {
        let k = seed as usize % rows_p.len();
        rows_p.rotate_left(k);
    }
    let rows_p: Vec<Vec<Polynomial>> = rows_p.into_iter().map(|mut r| { r.reverse(); r }).collect();
    prop_assert_eq!(is_zero_module(&build(&b, rank, &rows_p)).unwrap().is_zero, zt.is_zero);

    // a relation already in the submodule changes nothing
    if rows.len() >= 2 {
        let x = if b.generators().is_empty() { Polynomial::one(b.ring()) } else { Polynomial::var(b.ring(), 0) };
        let extra: Vec<Polynomial> = rows[0].iter().zip(&rows[1]).map(|(u, v)| &(&x * u) + v).collect();
        let mut more = rows.clone();
        more.push(extra);
        prop_assert_eq!(is_zero_module(&build(&b, rank, &more)).unwrap().is_zero, zt.is_zero);
    }

    // normal form is idempotent
    let basis = p.submodule_basis(Limits::default()).unwrap();
    let probe = FreeModuleElement::new(
        (0..rank).map(|i| Polynomial::var(b.ring(), 0).pow(i as u32 + 1)).collect(),
    ).unwrap();
    let nf = module_normal_form(&probe, &basis).unwrap();
    prop_assert_eq!(module_normal_form(&nf, &basis).unwrap(), nf);
    Ok(())
}

fn leibniz_case() -> impl Strategy<Value = (usize, Vec<(i64, u32, u32)>, Vec<(i64, u32, u32)>, i64)> {
    let terms = || proptest::collection::vec((-3i64..4, 0u32..4, 0u32..4), 1..4);
    (0usize..1000, terms(), terms(), -5i64..6)
}

fn to_poly(b: &AlgebraPresentation, ts: &[(i64, u32, u32)]) -> Polynomial {
    let n = b.generators().len();
    Polynomial::from_terms(
        b.ring(),
        ts.iter().map(|&(c, e0, e1)| {
            let mut e = vec![0; n];
            if n > 0 {
                e[0] = e0;
            }
            if n > 1 {
                e[1] = e1;
            }
            (Monomial::new(e), b.base().from_i64(c))
        }),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn module_zero_test_matches_oracle((b, rank, rows, seed) in presentation()) {
        check_presentation(b, rank, rows, seed)?;
    }

    /// `d` kills constants and satisfies Leibniz on every corpus algebra.
    #[test]
    fn universal_derivation((k, f, g, c) in leibniz_case()) {
        let algs = fixture_algebras().unwrap();
        let b = &algs[k % algs.len()].presentation;
        let omega = kahler(b).unwrap();
        let f = to_poly(b, &f);
        let g = to_poly(b, &g);
        let dc = omega.d(&Polynomial::constant(b.ring(), b.base().from_i64(c))).unwrap();
        prop_assert!(omega.is_zero_element(&dc).unwrap());
        let lhs = omega.d(&(&f * &g)).unwrap();
        let rhs = omega.d(&g).unwrap().scale(&f).add(&omega.d(&f).unwrap().scale(&g));
        prop_assert!(omega.is_zero_element(&lhs.sub(&rhs)).unwrap());
        // additivity
        let sum = omega.d(&(&f + &g)).unwrap().sub(&omega.d(&f).unwrap().add(&omega.d(&g).unwrap()));
        prop_assert!(omega.is_zero_element(&sum).unwrap());
    }
}
